#include "mongelab/bateman.hpp"
#include "mongelab/error.hpp"
#include "mongelab/extradim.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mongelab;
using V = PhiSolution::Variant;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::DomainError;
}

FunctionHandle poly(std::vector<double> c) { return FunctionHandle::polynomial(std::move(c)); }

const FunctionHandle id = poly({0.0, 1.0});
const FunctionHandle one = poly({1.0});
const FunctionHandle sq = poly({0.0, 0.0, 1.0});

double single_root(const PhiSolution& s, double x, double t, Interval r = {-50.0, 50.0})
{
    const auto roots = solve_phi(s, x, t, r);
    REQUIRE(roots.size() == 1);
    return roots[0];
}

} // namespace

TEST_CASE("u from phi")
{
    CHECK(u_from_phi(2.0, 1.0) == 2.0);
    CHECK(u_from_phi(0.0, 1.0) == 0.0);
    CHECK(code_of([] { u_from_phi(1.0, 0.0); }) == ErrorCode::ZeroGradient);

    // phi = (x + c t)^2 / 2 carries the constant solution u = c.
    const double c = 1.7;
    const ScalarField phi{[c](double x, double t) { return 0.5 * (x + c * t) * (x + c * t); }};
    for (double x : {-1.0, 0.5, 2.0}) {
        const PhiDerivatives d = differentiate(phi, x, 0.3);
        CHECK(u_from_phi(d.t, d.x) == doctest::Approx(c).epsilon(1e-9));
        CHECK(bateman_residual(d, 0.0) <= 1e-8);
    }
}

TEST_CASE("residual of the particular potentials")
{
    for (double k : {0.0, 0.7, -1.3})
        for (double x : {-2.0, 0.3, 1.5})
            for (double t : {0.2, 1.0, 3.0}) {
                CHECK(bateman_residual(quadratic_phi(k), k, x, t) <= 1e-10);
                CHECK(bateman_residual(root_phi(k), k, x, t) <= 1e-10);
            }
    // Finite-difference path on the same potentials.
    const ScalarField q = quadratic_phi(0.7);
    const ScalarField bare{q.f};
    CHECK(bateman_residual(bare, 0.7, 0.5, 0.8) <= 1e-8);
    CHECK(bateman_residual(bare, 0.2, 0.5, 0.8) > 1e-3);

    const ScalarField lin{[](double x, double) { return x; }};
    CHECK(bateman_residual(lin, 0.0, 0.4, 0.9) == 0.0);
    const ScalarField flat{[](double, double) { return 3.0; }};
    CHECK(code_of([&] { bateman_residual(flat, 0.0, 0.4, 0.9); }) == ErrorCode::DegeneratePoint);
}

TEST_CASE("solve_phi examples")
{
    const double c = 1.3, k = 0.6;
    for (double x : {0.4, 1.1})
        for (double t : {0.3, 0.9}) {
            CHECK(single_root({id, id, c, V::Classic, 0.0}, x, t) == doctest::Approx(c / (x + t)).epsilon(1e-12));

            const PhiSolution cg{one, id, c, V::ConstGrad, k};
            const double pc = single_root(cg, x, t);
            CHECK(pc == doctest::Approx((c - x - 0.5 * k * t * t) / t).epsilon(1e-12));
            CHECK(bateman_residual(implicit_derivatives(cg, x, t, pc), k) <= 1e-8);

            const PhiSolution lg{id, one, c, V::LinGrad, k};
            const double pl = single_root(lg, x, t);
            CHECK(pl == doctest::Approx((c * x - std::cos(k * t)) / std::sin(k * t)).epsilon(1e-12));
            CHECK(bateman_residual(implicit_derivatives(lg, x, t, pl), k * k * x) <= 1e-8);
        }
    CHECK(PhiSolution{id, one, c, V::LinGrad, k}.g(2.0) == doctest::Approx(k * k * 2.0));

    CHECK(code_of([&] { solve_phi({id, id, c, V::Classic, 0.0}, 1.0, 1.0, {5.0, 10.0}); }) == ErrorCode::NoRoot);
    CHECK(code_of([&] { solve_phi({id, id, c, V::Classic, 0.0}, 0.0, 0.0, {-1.0, 1.0}); }) ==
          ErrorCode::DegenerateCoefficients);
    CHECK(code_of([&] { solve_phi({id, one, c, V::LinGrad, k}, 0.0, 0.5, {-1.0, 1.0}); }) == ErrorCode::DomainError);
}

TEST_CASE("every root satisfies the equation")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> xs(0.2, 2.0), ts(0.1, 1.5);
    const PhiSolution fams[] = {{id, sq, 1.0, V::Classic, 0.0},
                                {id, sq, 1.0, V::ConstGrad, 0.5},
                                {id, sq, 1.0, V::LinGrad, 0.5},
                                {poly({0.0, 1.0, 0.0, 1.0}), poly({2.0, 1.0}), -0.5, V::ConstGrad, -0.8}};
    int checked = 0;
    for (const auto& s : fams)
        for (int n = 0; n < 40; ++n) {
            const double x = xs(rng), t = ts(rng);
            std::vector<double> roots;
            try {
                roots = solve_phi(s, x, t, {-20.0, 20.0});
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::NoRoot);
                continue;
            }
            for (double phi : roots) {
                const PhiDerivatives d = implicit_derivatives(s, x, t, phi);
                if (std::abs(d.x) < 1e-6)
                    continue;
                CHECK(bateman_residual(d, s.g(x)) <= 1e-8);
                ++checked;
            }
        }
    CHECK(checked > 100);
}

TEST_CASE("implicit derivatives agree with differences of the root")
{
    const PhiSolution s{id, sq, 1.0, V::ConstGrad, 0.5};
    const double x = 0.7, t = 0.6, h = 1e-4;
    auto root = [&](double xx, double tt) { return single_root(s, xx, tt, {0.0, 20.0}); };
    const PhiDerivatives d = implicit_derivatives(s, x, t, root(x, t));
    CHECK(d.x == doctest::Approx((root(x + h, t) - root(x - h, t)) / (2 * h)).epsilon(1e-7));
    CHECK(d.t == doctest::Approx((root(x, t + h) - root(x, t - h)) / (2 * h)).epsilon(1e-7));
    // The closed expressions for the constant-gradient family.
    const double F = d.phi, F1 = 1.0, G1 = 2.0 * d.phi, k = 0.5;
    const double px = -F / ((x + 0.5 * k * t * t) * F1 + t * G1);
    CHECK(d.x == doctest::Approx(px).epsilon(1e-12));
    CHECK(d.t == doctest::Approx((k * t * F + d.phi * d.phi) * px / F).epsilon(1e-12));
}

TEST_CASE("u is invariant under relabelling phi")
{
    // h(phi) = phi^3 + phi; F o h = h and G o h = h^2.
    const PhiSolution base{id, sq, 1.0, V::ConstGrad, 0.5};
    const PhiSolution relabelled{poly({0.0, 1.0, 0.0, 1.0}), poly({0.0, 0.0, 1.0, 0.0, 2.0, 0.0, 1.0}), 1.0,
                                 V::ConstGrad, 0.5};
    for (double x : {0.3, 0.9})
        for (double t : {0.2, 0.8}) {
            const double phi = single_root(base, x, t, {0.0, 20.0});
            const double psi = single_root(relabelled, x, t, {0.0, 5.0});
            CHECK(psi * psi * psi + psi == doctest::Approx(phi).epsilon(1e-12));
            const PhiDerivatives a = implicit_derivatives(base, x, t, phi);
            const PhiDerivatives b = implicit_derivatives(relabelled, x, t, psi);
            CHECK(std::abs(u_from_phi(a.t, a.x) - u_from_phi(b.t, b.x)) <= 1e-9);
        }
}

TEST_CASE("u from an implicit family solves the driven equation")
{
    const double k = 0.5;
    const PhiSolution s{id, sq, 1.0, V::ConstGrad, k};
    const auto u = [&](double x, double t) {
        const double phi = single_root(s, x, t, {0.0, 20.0});
        const PhiDerivatives d = implicit_derivatives(s, x, t, phi);
        return u_from_phi(d.t, d.x);
    };
    for (double x : {0.4, 1.0})
        for (double t : {0.3, 0.7})
            CHECK(pde_residual_at(u, [k](double, double) { return k; }, x, t) <= 1e-7);

    const PhiSolution lg{id, sq, 1.0, V::LinGrad, k};
    const auto ul = [&](double x, double t) {
        const double phi = single_root(lg, x, t, {0.0, 20.0});
        const PhiDerivatives d = implicit_derivatives(lg, x, t, phi);
        return u_from_phi(d.t, d.x);
    };
    CHECK(pde_residual_at(ul, [k](double x, double) { return k * k * x; }, 0.8, 0.5) <= 1e-7);
}
