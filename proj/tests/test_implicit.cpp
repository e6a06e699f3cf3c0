#include "mongelab/characteristics.hpp"
#include "mongelab/error.hpp"
#include "mongelab/implicit.hpp"
#include "mongelab/lambertw.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mongelab;

namespace {

std::vector<double> roots(const ImplicitRelation& r, double x, double t, Interval range)
{
    std::vector<double> out;
    for (const auto& root : solve_u(r, x, t, range).roots)
        out.push_back(root.u);
    return out;
}

} // namespace

TEST_CASE("canonical pairs with G = 0")
{
    const auto none = make_relation(PressureSpec::none(), FunctionHandle::zero());
    CHECK(none.residual(2.0, 1.0, -2.0) == doctest::Approx(0.0));
    CHECK(none.residual(2.0, 1.0, 1.0) == doctest::Approx(3.0));

    const double k = 0.6;
    const auto cst = make_relation(PressureSpec::constant(k), FunctionHandle::zero());
    const double x = 0.3, t = 0.7;
    const double u = (0.5 * k * t * t - x) / t;
    CHECK(std::abs(cst.residual(x, t, u)) <= 1e-14);

    const auto lin = make_relation(PressureSpec::linear_in_x(k), FunctionHandle::zero());
    const double ul = -k * x * std::cos(k * t) / std::sin(k * t);
    CHECK(std::abs(lin.residual(x, t, ul)) <= 1e-14);

    for (const auto* r : {&none, &cst, &lin})
        CHECK(r->pair_residual() <= 1e-8);
}

TEST_CASE("PolyX has no canonical pair")
{
    try {
        make_relation(PressureSpec::poly_x({0.0, 0.0, 1.0}), FunctionHandle::zero());
        FAIL("expected UnsupportedVariant");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedVariant);
    }
}

TEST_CASE("solve_u examples")
{
    const auto none = make_relation(PressureSpec::none(), FunctionHandle::zero());
    const auto r0 = roots(none, 2.0, 1.0, {-10.0, 10.0});
    REQUIRE(r0.size() == 1);
    CHECK(r0[0] == doctest::Approx(-2.0).epsilon(1e-12));

    const auto logf = make_relation(PressureSpec::none(), FunctionHandle::log_form(1.0, 1.0));
    const auto r1 = roots(logf, -1.0, 0.2, {1e-6, 5.0});
    REQUIRE(r1.size() == 1);
    CHECK(r1[0] == doctest::Approx(-5.0 * lambert_w(Branch::W0, -0.2 * std::exp(-1.0))).epsilon(1e-11));

    const double z = -0.5 * std::exp(-1.0);
    const auto r2 = roots(logf, -1.0, 0.5, {1e-6, 20.0});
    REQUIRE(r2.size() == 2);
    CHECK(r2[0] == doctest::Approx(-2.0 * lambert_w(Branch::W0, z)).epsilon(1e-11));
    CHECK(r2[1] == doctest::Approx(-2.0 * lambert_w(Branch::Wm1, z)).epsilon(1e-11));
    // Past the face there is no real solution.
    CHECK(solve_u(logf, 0.0, 0.5, {1e-6, 20.0}).no_root);

    const URoots empty = solve_u(none, 2.0, 1.0, {0.0, 1.0});
    CHECK(empty.no_root);
    CHECK(empty.roots.empty());
}

TEST_CASE("segment relations reproduce the driven segments")
{
    const Profile seg = LinearSegment{0.5, 1.5};
    const double k = 0.7;
    for (const auto& p : {PressureSpec::none(), PressureSpec::constant(k), PressureSpec::linear_in_x(k)}) {
        const auto rel = make_relation(p, relation_G_for_profile(seg, p));
        for (double x : {-0.8, 0.1, 0.9})
            for (double t : {-0.3, 0.2, 0.4}) {
                const auto r = roots(rel, x, t, default_u_range(seg, p, x, t));
                REQUIRE(r.size() == 1);
                const PointValues c = solve_at(seg, p, x, t);
                REQUIRE(c.u.size() == 1);
                CHECK(std::abs(r[0] - c.u[0]) <= 1e-10 * std::max(1.0, std::abs(r[0])));
            }
    }
}

TEST_CASE("time-only driver")
{
    const std::vector<double> kc{0.5, 0.3};
    const auto p = PressureSpec::time_only(kc);
    const Profile seg = LinearSegment{0.2, 0.8};
    const auto rel = make_relation(p, relation_G_for_profile(seg, p));
    for (double x : {-0.5, 0.6})
        for (double t : {0.3, 0.7}) {
            const double K = 0.5 * t + 0.15 * t * t;
            const double M = 0.25 * t * t + 0.1 * t * t * t;
            const double x0 = (x + 0.2 * t + t * K - M) / (1 - 0.8 * t);
            const double expected = 0.2 + 0.8 * x0 + K;
            const auto r = roots(rel, x, t, default_u_range(seg, p, x, t));
            REQUIRE(r.size() == 1);
            CHECK(r[0] == doctest::Approx(expected).epsilon(1e-11));
        }
}

TEST_CASE("hodograph time")
{
    const auto zero = FunctionHandle::zero();
    CHECK(hodograph_time(zero, PressureSpec::none(), 1.5, 0.5) == doctest::Approx(-3.0).epsilon(1e-12));
    const auto F = FunctionHandle::polynomial({0.1, 0.2, 0.3});
    CHECK(hodograph_time(F, PressureSpec::linear_in_x(0.9), 0.0, 0.7) == doctest::Approx(F(0.7)).epsilon(1e-14));

    for (double k : {0.5, 1.0, 2.0})
        for (double x : {-0.9, 0.3, 1.4})
            for (double u : {-2.0, 0.4, 1.7}) {
                const double t = hodograph_time(zero, PressureSpec::linear_in_x(k), x, u);
                const double closed = -std::copysign(1.0, u) / k * std::asin(k * x / std::hypot(u, k * x));
                CHECK(std::abs(t - closed) <= 1e-10);
                CHECK(std::abs(k * x * std::cos(k * t) + u * std::sin(k * t)) <= 1e-9);
            }

    try {
        hodograph_time(zero, PressureSpec::none(), 1.0, 0.0);
        FAIL("expected ZeroVelocity");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroVelocity);
    }
    try {
        // p(x) - p(z) = -(x^2 - z^2)/2 turns the radicand negative near z = 0.
        hodograph_time(zero, PressureSpec::poly_x({0.0, -1.0}), 2.0, 0.5);
        FAIL("expected TurningPoint");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TurningPoint);
    }
}

TEST_CASE("hodograph argument depends on the Riemann invariant only")
{
    const auto p = PressureSpec::poly_x({0.3, -0.2, 0.5}, 1.5);
    for (double x : {-1.0, 0.5, 2.0})
        for (double u : {1.5, 3.0}) {
            const double rinv = 0.5 * u * u + pressure_at(p, x);
            const double lhs = hodograph_argument(p, x, u);
            const double rhs = std::sqrt(2 * rinv - 2 * pressure_at(p, 0.0));
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs));
            CHECK(std::abs(lhs - u * std::sqrt(1 + 2 * (pressure_at(p, x) - pressure_at(p, 0.0)) / (u * u))) <=
                  1e-12 * std::max(1.0, rhs));
        }
}

TEST_CASE("inverting the hodograph")
{
    const auto zero = FunctionHandle::zero();
    const auto a = invert_hodograph(zero, PressureSpec::none(), 2.0, 1.0, {-10.0, -1e-3});
    REQUIRE(a.u.size() == 1);
    CHECK(a.u[0] == doctest::Approx(-2.0).epsilon(1e-10));

    const auto b = invert_hodograph(zero, PressureSpec::linear_in_x(1.0), 1.0, std::numbers::pi / 4, {-10.0, -1e-3});
    REQUIRE(b.u.size() == 1);
    CHECK(b.u[0] == doctest::Approx(-1.0).epsilon(1e-9));

    // Segment boundary data: x + u t = (u - alpha)/beta, so F(u) = (u - alpha)/(beta u).
    const double alpha = 1.0, beta = 0.5;
    const auto F = FunctionHandle::custom([&](double u) { return (u - alpha) / (beta * u); },
                                          [&](double u) { return alpha / (beta * u * u); });
    for (double x : {0.2, 1.0})
        for (double t : {0.3, 0.9}) {
            const auto h = invert_hodograph(F, PressureSpec::none(), x, t, {0.05, 20.0});
            REQUIRE(h.u.size() == 1);
            CHECK(h.u[0] == doctest::Approx((alpha + beta * x) / (1 - beta * t)).epsilon(1e-9));
        }
}

TEST_CASE("solve_u and invert_hodograph agree")
{
    const auto zero = FunctionHandle::zero();
    for (double k : {0.0, 0.8}) {
        const auto p = k == 0.0 ? PressureSpec::none() : PressureSpec::linear_in_x(k);
        const auto rel = make_relation(p, zero);
        for (double x : {0.4, 1.2})
            for (double t : {0.5, 1.1}) {
                const auto s = roots(rel, x, t, {-20.0, -1e-3});
                const auto h = invert_hodograph(zero, p, x, t, {-20.0, -1e-3});
                REQUIRE(s.size() == h.u.size());
                for (std::size_t i = 0; i < s.size(); ++i)
                    CHECK(std::abs(s[i] - h.u[i]) <= 1e-9);
            }
    }
}
