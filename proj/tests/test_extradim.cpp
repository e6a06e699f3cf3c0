#include "mongelab/error.hpp"
#include "mongelab/extradim.hpp"
#include "mongelab/lambertw.hpp"
#include "mongelab/series.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mongelab;

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

double u_at(const DoubledField& f) { return extract_u(f).value(); }

double factorial(int n)
{
    double r = 1.0;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

} // namespace

TEST_CASE("lift examples")
{
    const double c = 0.7;
    const DoubledField k = lift(LinearSegment{c, 0.0}, PressureSpec::none(), 0.3, 6, 6);
    for (int j = 0; j <= 6; ++j) {
        CHECK(k.bijet(0, j) == doctest::Approx(std::pow(c, j + 1) / factorial(j + 1)).epsilon(1e-15));
        for (int i = 1; i <= 6; ++i)
            CHECK(k.bijet(i, j) == 0.0);
    }

    const DoubledField s = lift(LinearSegment{1.0, 2.0}, PressureSpec::none(), 0.5, 5, 5);
    CHECK(s.bijet(0, 0) == doctest::Approx(2.0));
    CHECK(s.bijet(1, 0) == doctest::Approx(2.0));
    for (int i = 2; i <= 5; ++i)
        CHECK(s.bijet(i, 0) == 0.0);

    const DoubledField z = lift(LinearSegment{0.0, 0.0}, PressureSpec::linear_in_x(1.0), 0.0, 4, 4);
    for (double v : z.bijet.data())
        CHECK(v == 0.0);
    CHECK(z.particular == Particular::LinGradTan);
    CHECK(lift(Exponential{}, PressureSpec::constant(1.0), 0.0, 4, 4).particular == Particular::ConstGradShift);
}

TEST_CASE("free kernel")
{
    const DoubledField f = lift(Exponential{0.8, 1.1}, PressureSpec::none(), 0.2, 8, 8);
    const BiJet same = free_kernel(f.bijet, 0.0);
    for (std::size_t i = 0; i < same.data().size(); ++i)
        CHECK(same.data()[i] == f.bijet.data()[i]);

    BiJet xa(0.0, 3, 3);
    xa(1, 1) = 1.0;
    const BiJet moved = free_kernel(xa, 0.4);
    CHECK(moved(0, 0) == doctest::Approx(0.4));
    CHECK(moved(1, 1) == 1.0);

    const double a = 1.0, b = 0.5, x0 = 0.3;
    for (double t : {-0.4, 0.1, 0.3}) {
        const Jet u = extract_u(evolve_free(lift(LinearSegment{a, b}, PressureSpec::none(), x0, 40, 40), t));
        CHECK(u[0] == doctest::Approx((a + b * x0) / (1 - b * t)).epsilon(1e-13));
        CHECK(u[1] == doctest::Approx(b / (1 - b * t)).epsilon(1e-13));
    }
}

TEST_CASE("constant-gradient kernel")
{
    const double k = 0.6, t = 0.3;
    CHECK(u_at(evolve(lift(LinearSegment{0.0, 0.0}, PressureSpec::constant(k), 0.1, 6, 6), t)) ==
          doctest::Approx(k * t).epsilon(1e-15));
    const double a = 0.5, b = 1.5, x0 = -0.2;
    CHECK(u_at(evolve(lift(LinearSegment{a, b}, PressureSpec::constant(k), x0, 40, 40), t)) ==
          doctest::Approx(k * t + (a + b * (x0 + 0.5 * k * t * t)) / (1 - b * t)).epsilon(1e-13));
    const DoubledField f = lift(Exponential{1.0, 1.0}, PressureSpec::none(), 0.0, 10, 10);
    const DoubledField free = evolve_free(f, t);
    const DoubledField zero_k = evolve_const_grad(f, 0.0, t);
    for (std::size_t i = 0; i < free.bijet.data().size(); ++i)
        CHECK(zero_k.bijet.data()[i] == doctest::Approx(free.bijet.data()[i]).epsilon(1e-15));
}

TEST_CASE("linear-gradient kernel")
{
    const double k = 0.8, t = 0.4, x0 = 0.35;
    const Jet z = extract_u(evolve(lift(LinearSegment{0.0, 0.0}, PressureSpec::linear_in_x(k), x0, 6, 6), t));
    CHECK(z[0] == doctest::Approx(k * x0 * std::tan(k * t)).epsilon(1e-15));
    CHECK(z[1] == doctest::Approx(k * std::tan(k * t)).epsilon(1e-15));

    const double a = 0.5, b = 1.0;
    for (double tt : {0.1, 0.3, 0.5}) {
        const double c = std::cos(tt), s = std::sin(tt);
        const double expected = x0 * std::tan(tt) + (a + b * x0 / c) / (c - b * s);
        CHECK(u_at(evolve(lift(LinearSegment{a, b}, PressureSpec::linear_in_x(1.0), x0, 60, 60), tt)) ==
              doctest::Approx(expected).epsilon(1e-13));
    }

    // Literal three-factor form at x0 = 0: scale by 1/cos^(i+j+1), free-evolve with sin(2kt)/(2k).
    const DoubledField f = lift(Exponential{0.9, 1.3}, PressureSpec::none(), 0.0, 10, 10);
    const double c = std::cos(k * t);
    BiJet scaled = lift(Exponential{0.9, 1.3}, PressureSpec::none(), 0.0, 20, 10).bijet;
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 10; ++j)
            scaled(i, j) /= std::pow(c, i + j + 1);
    const BiJet literal = free_kernel(scaled, std::sin(2 * k * t) / (2 * k));
    const DoubledField kernel = evolve_lin_grad(f, k, t);
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j)
            CHECK(kernel.bijet(i, j) == doctest::Approx(literal(i, j)).epsilon(1e-13));

    CHECK(code_of([&] { evolve_lin_grad(f, 1.0, std::numbers::pi / 2); }) == ErrorCode::PoleError);
}

TEST_CASE("linear kernel tends to the free kernel as k -> 0 at O(k^2)")
{
    const DoubledField f = lift(Exponential{1.0, 1.0}, PressureSpec::none(), -0.5, 14, 14);
    const double t = 0.2;
    const double free = u_at(evolve_free(f, t));
    const double e1 = std::abs(u_at(evolve_lin_grad(f, 0.02, t)) - free);
    const double e2 = std::abs(u_at(evolve_lin_grad(f, 0.01, t)) - free);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("extract_u")
{
    const Profile p = Exponential{1.2, 0.7};
    const Jet u = extract_u(lift(p, PressureSpec::none(), 0.1, 8, 8));
    const Jet ref = profile_jet(p, 0.1, 8);
    for (std::size_t i = 0; i <= 8; ++i)
        CHECK(u[i] == doctest::Approx(ref[i]).epsilon(1e-13));

    // Linear-gradient exponential against the closed Lambert front.
    const double k = 0.7;
    for (double x : {-2.0, -1.0})
        for (double t : {0.1, 0.25}) {
            const double v = u_at(evolve(lift(Exponential{1.0, 1.0}, PressureSpec::linear_in_x(k), x, 40, 40), t));
            CHECK(v == doctest::Approx(lambert_front(1, 1, PressureSpec::linear_in_x(k), x, t, Branch::W0))
                           .epsilon(1e-10));
        }
}

TEST_CASE("kernel coefficients equal series coefficients")
{
    const Profile seg = LinearSegment{0.4, 1.3};
    const Profile ex = Exponential{0.9, 1.4};
    for (const auto& p : {PressureSpec::none(), PressureSpec::constant(0.5), PressureSpec::linear_in_x(0.8)})
        for (const Profile* prof : {&seg, &ex})
            for (double x0 : {-0.7, 0.3}) {
                const auto kernel = time_taylor(*prof, p, x0, 14, 2);
                const auto series = build_series(*prof, p, x0, 14);
                for (int n = 0; n <= 14; ++n)
                    for (std::size_t i = 0; i <= 2; ++i) {
                        const double a = kernel[static_cast<std::size_t>(n)][i];
                        const double b = series.coeffs[static_cast<std::size_t>(n)][i];
                        REQUIRE(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(b)));
                    }
            }
}

TEST_CASE("diffusion residual")
{
    for (const auto& p : {PressureSpec::none(), PressureSpec::constant(0.5), PressureSpec::linear_in_x(0.7)}) {
        const DoubledField g = evolve(lift(Exponential{1.0, 1.0}, p, 0.2, 10, 10), 0.15);
        CHECK(diffusion_residual(g, 0.0) <= 1e-12);
        const double r1 = diffusion_residual(g, 1e-3);
        const double r2 = diffusion_residual(g, 5e-4);
        CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
    }
    const DoubledField zero = evolve(lift(LinearSegment{0.0, 0.0}, PressureSpec::none(), 0.0, 6, 6), 0.3);
    CHECK(diffusion_residual(zero, 0.0) == 0.0);
    CHECK(diffusion_residual(zero, 1e-3) == 0.0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    BiJet junk(0.0, 6, 6);
    for (auto& v : junk.data())
        v = d(rng);
    const double r = diffusion_residual([&](double) { return junk; }, LinearOperator{}, 0.0, 1e-3);
    CHECK(r > 0.1);
    CHECK(code_of([&] { diffusion_residual([&](double) { return junk; }, LinearOperator{}, 0.0, 0.0); }) ==
          ErrorCode::DomainError);
}

TEST_CASE("commuting generators")
{
    using G = Generator;
    for (G g : {G::Dt, G::Da, G::Dx, G::Boost})
        CHECK(commutes(g, PressureSpec::none()));
    CHECK(commutes(G::Dt, PressureSpec::linear_in_x(1.0)));
    CHECK(commutes(G::Boost, PressureSpec::linear_in_x(1.0)));
    CHECK_FALSE(commutes(G::Dx, PressureSpec::linear_in_x(1.0)));
    CHECK(commutes(G::Dt, PressureSpec::poly_x({0.0, 0.0, 1.0})));
    CHECK_FALSE(commutes(G::Dx, PressureSpec::poly_x({0.0, 0.0, 1.0})));
    CHECK_FALSE(commutes(G::Boost, PressureSpec::poly_x({0.0, 0.0, 1.0})));

    const DoubledField f = evolve(lift(Exponential{}, PressureSpec::poly_x({0.0, 0.0, 0.3}), 0.0, 12, 12), 0.1);
    CHECK(code_of([&] { solution_family(f, {G::Dx}); }) == ErrorCode::NotCommuting);
    CHECK(diffusion_residual(solution_family(f, {G::Dt}), 0.0) <= 1e-10);
}

TEST_CASE("operator-generated families")
{
    using G = Generator;
    const DoubledField f = evolve(lift(Exponential{0.8, 1.2}, PressureSpec::none(), 0.1, 12, 12), 0.2);
    for (const OperatorWord& w : {OperatorWord{G::Boost}, OperatorWord{G::Dx}, OperatorWord{G::Da, G::Dx},
                                  OperatorWord{G::Dt}, OperatorWord{G::Boost, G::Da}})
        CHECK(diffusion_residual(solution_family(f, w), 0.0) <= 1e-10);

    // d/da d/dx of (e^{au} - 1)/a is u u_x e^{au}; a-layer j at x0 is u u_x u^j / j!.
    const DoubledField f0 = lift(Exponential{0.8, 1.2}, PressureSpec::none(), 0.1, 12, 12);
    const Jet u = extract_u(f0);
    const DoubledField g = solution_family(f0, {G::Da, G::Dx});
    for (int j = 0; j <= 6; ++j)
        CHECK(g.bijet(0, j) == doctest::Approx(u[0] * u[1] * std::pow(u[0], j) / factorial(j)).epsilon(1e-12));

    const DoubledField lin = evolve(lift(Exponential{}, PressureSpec::linear_in_x(0.6), 0.1, 12, 12), 0.2);
    CHECK(diffusion_residual(solution_family(lin, {G::Boost}), 0.0) <= 1e-10);
    CHECK(diffusion_residual(solution_family(lin, {G::Dt, G::Boost}), 0.0) <= 1e-10);
}

TEST_CASE("algebra of the kernel generators")
{
    const AlgebraCheck a = algebra_check(12, 12, 0.4);
    CHECK(a.ab_minus_a <= 1e-12);
    CHECK(a.ac <= 1e-12);
    CHECK(a.bc <= 1e-12);

    BiJet m(0.0, 4, 4);
    m(2, 3) = 1.0;
    CHECK(apply_A(m)(1, 2) == 6.0);
    CHECK(apply_B(m)(2, 3) == 3.0);
    CHECK(apply_C(m)(2, 3) == 0.0);
}

TEST_CASE("Galilean covariance")
{
    const double k = 0.5;
    const SolutionHandle inv{[](double x, double t) { return -x / t; }};
    const SolutionHandle c = covariance_const(inv, k);
    for (double x : {-0.5, 0.7})
        for (double t : {0.6, 1.2})
            CHECK(c.u(x, t) == doctest::Approx(k * t - (x + 0.5 * k * t * t) / t).epsilon(1e-15));
    CHECK(pde_residual(c, [k](double, double) { return k; }) <= 1e-8);
    const SolutionHandle id = covariance_const(inv, 0.0);
    CHECK(id.u(0.3, 0.9) == inv.u(0.3, 0.9));

    const SolutionHandle zero{[](double, double) { return 0.0; }};
    const SolutionHandle l = covariance_linear(zero, k);
    CHECK(l.u(0.4, 0.8) == doctest::Approx(k * 0.4 * std::tan(k * 0.8)).epsilon(1e-15));
    CHECK(pde_residual(covariance_linear(inv, k), [k](double x, double) { return k * k * x; }) <= 1e-8);
    const SolutionHandle tiny = covariance_linear(inv, 1e-6);
    CHECK(std::abs(tiny.u(0.4, 0.8) - inv.u(0.4, 0.8)) <= 1e-5);

    // Lambert front under the linear map is the linear body-force front.
    SolutionHandle front{[](double x, double t) { return lambert_front(1, 1, PressureSpec::none(), x, t, Branch::W0); },
                         {-4.0, -3.0},
                         {0.05, 0.3}};
    const SolutionHandle driven = covariance_linear(front, 0.7);
    for (double x : {-3.8, -3.2})
        for (double t : {0.1, 0.25})
            CHECK(driven.u(x, t) ==
                  doctest::Approx(lambert_front(1, 1, PressureSpec::linear_in_x(0.7), x, t, Branch::W0)).epsilon(1e-12));

    const SolutionHandle bad{[](double x, double t) { return x * t; }};
    CHECK(code_of([&] { covariance_const(bad, k); }) == ErrorCode::ResidualError);
    CHECK(code_of([&] { covariance_linear(bad, k); }) == ErrorCode::ResidualError);
}

TEST_CASE("covariance k -> 0 rates")
{
    const SolutionHandle seg{[](double x, double t) { return (1.0 - 0.5 * x) / (1.0 + 0.5 * t); }};
    auto err = [&](auto map, double k) { return std::abs(map(seg, k).u(0.3, 0.8) - seg.u(0.3, 0.8)); };
    const double c1 = err(covariance_const, 2e-3), c2 = err(covariance_const, 1e-3);
    CHECK(c1 / c2 == doctest::Approx(2.0).epsilon(0.01));
    const double l1 = err(covariance_linear, 2e-3), l2 = err(covariance_linear, 1e-3);
    CHECK(l1 / l2 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("transport factors")
{
    const Grid grid;
    for (auto pair : {tan_pair(0.7), cot_pair(0.7)}) {
        const auto& [u, v] = pair;
        CHECK(verify_v_factor(u, v, grid) <= 1e-10);
        // Finite-difference path on the same forms.
        const ClosedForm uf{u.f, {}, {}}, vf{v.f, {}, {}};
        CHECK(verify_v_factor(uf, vf, grid) <= 1e-10);
    }
    const ClosedForm u{[](double x, double) { return x * x; }, {}, {}};
    const ClosedForm one{[](double, double) { return 1.0; }, {}, {}};
    CHECK(verify_v_factor(u, one, grid) > 0.1);
    Grid through_pole;
    through_pole.t = {-0.5, 0.5};
    through_pole.nt = 11;
    const auto [cu, cv] = cot_pair(1.0);
    CHECK(code_of([&] { verify_v_factor(cu, cv, through_pole); }) == ErrorCode::PoleOnGrid);
}

TEST_CASE("bijet JSON")
{
    const DoubledField f = lift(Exponential{}, PressureSpec::none(), 0.25, 3, 2);
    const auto j = bijet_to_json(f.bijet);
    CHECK(j.at("x0") == 0.25);
    CHECK(j.at("coeffs").size() == 4);
    const BiJet back = bijet_from_json(j);
    CHECK(back.nx() == 3);
    CHECK(back.na() == 2);
    for (std::size_t i = 0; i < back.data().size(); ++i)
        CHECK(back.data()[i] == f.bijet.data()[i]);
    CHECK(code_of([] { bijet_from_json(nlohmann::json{{"x0", 0.0}}); }) == ErrorCode::ConfigError);
}
