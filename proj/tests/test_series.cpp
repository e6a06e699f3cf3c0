#include "mongelab/error.hpp"
#include "mongelab/lambertw.hpp"
#include "mongelab/series.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

using namespace mongelab;

namespace {

constexpr double e = std::numbers::e;

// Test-side closed segments.
double seg_none(double a, double b, double x, double t) { return (a + b * x) / (1 - b * t); }
double seg_const(double a, double b, double k, double x, double t)
{
    return k * t + (a + b * (x + 0.5 * k * t * t)) / (1 - b * t);
}
double seg_lin(double a, double b, double k, double x, double t)
{
    const double c = std::cos(k * t), s = std::sin(k * t);
    return k * x * std::tan(k * t) + (a + b * x / c) / (c - (b / k) * s);
}

double residual(const std::function<double(double, double)>& u, const std::function<double(double)>& g, double x,
                double t)
{
    const double h = 1e-5;
    const double ut = (u(x, t + h) - u(x, t - h)) / (2 * h);
    const double ux = (u(x + h, t) - u(x - h, t)) / (2 * h);
    return std::abs(ut - u(x, t) * ux - g(x));
}

} // namespace

TEST_CASE("segment coefficients are beta^n (alpha + beta x0)")
{
    const auto ts = build_series(LinearSegment{0.5, 1.5}, PressureSpec::none(), 0.4, 20);
    REQUIRE(ts.order() == 20);
    for (int n = 0; n <= 20; ++n)
        CHECK(ts.at(n) == doctest::Approx(std::pow(1.5, n) * (0.5 + 1.5 * 0.4)).epsilon(1e-13));
}

TEST_CASE("constant driver first coefficient is k + u u'")
{
    const Profile p = Exponential{0.7, 1.3};
    const double x0 = -0.2, k = 0.9;
    const auto ts = build_series(p, PressureSpec::constant(k), x0, 4);
    const double u = 0.7 * std::exp(x0 / 1.3);
    CHECK(ts.at(1) == doctest::Approx(k + u * u / 1.3).epsilon(1e-14));
}

TEST_CASE("exponential coefficients (n+1)^(n-1)/n!")
{
    const auto ts = build_series(Exponential{1.0, 1.0}, PressureSpec::none(), 0.0, 25);
    double fact = 1.0;
    for (int n = 0; n <= 25; ++n) {
        if (n > 0)
            fact *= n;
        CHECK(ts.at(n) == doctest::Approx(std::pow(n + 1.0, n - 1.0) / fact).epsilon(1e-12));
    }
}

TEST_CASE("eval_series examples")
{
    const auto seg = eval_series(build_series(LinearSegment{1.0, 2.0}, PressureSpec::none(), 0.0, 40), 0.25);
    CHECK(seg.u == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(seg.err <= 1e-10);
    CHECK_FALSE(seg.diverging);

    const auto acc = eval_series(build_series(LinearSegment{0.0, 0.0}, PressureSpec::constant(3.0), 0.0, 10), 0.2);
    CHECK(acc.u == doctest::Approx(0.6).epsilon(1e-15));

    const auto ex = eval_series(build_series(Exponential{1.0, 1.0}, PressureSpec::none(), 0.0, 40), 0.1);
    CHECK(ex.u == doctest::Approx(-10.0 * lambert_w(Branch::W0, -0.1)).epsilon(1e-12));

    const auto far = eval_series(build_series(LinearSegment{1.0, 2.0}, PressureSpec::none(), 0.0, 40), 0.8);
    CHECK(far.diverging);
}

TEST_CASE("series matches the closed segments up to 0.8 t_break")
{
    const double a = 0.3, b = 1.2;
    const double k = 0.7;
    for (double x : {-1.0, 0.0, 0.6}) {
        const double tb = 1.0 / b;
        for (double f : {-0.5, 0.2, 0.5, 0.8}) {
            const double t = f * tb;
            const double n = eval_series(build_series(LinearSegment{a, b}, PressureSpec::none(), x, 160), t).u;
            CHECK(std::abs(n - seg_none(a, b, x, t)) <= 1e-10 * std::max(1.0, std::abs(n)));
            const double c = eval_series(build_series(LinearSegment{a, b}, PressureSpec::constant(k), x, 160), t).u;
            CHECK(std::abs(c - seg_const(a, b, k, x, t)) <= 1e-10 * std::max(1.0, std::abs(c)));
        }
        const double tl = std::atan(k / b) / k;
        for (double f : {0.2, 0.5, 0.8}) {
            const double t = f * tl;
            const double l = eval_series(build_series(LinearSegment{a, b}, PressureSpec::linear_in_x(k), x, 160), t).u;
            CHECK(std::abs(l - seg_lin(a, b, k, x, t)) <= 1e-10 * std::max(1.0, std::abs(l)));
        }
    }
}

TEST_CASE("segment_closed agrees with the test-side formulas")
{
    CHECK(segment_closed(1, 2, PressureSpec::none(), 0.3, 0.2) == doctest::Approx(seg_none(1, 2, 0.3, 0.2)));
    CHECK(segment_closed(1, 2, PressureSpec::constant(0.5), 0.3, 0.2) ==
          doctest::Approx(seg_const(1, 2, 0.5, 0.3, 0.2)));
    CHECK(segment_closed(1, 2, PressureSpec::linear_in_x(0.5), 0.3, 0.2) ==
          doctest::Approx(seg_lin(1, 2, 0.5, 0.3, 0.2)));
}

TEST_CASE("closed-form driven solutions satisfy the PDE")
{
    const double k = 0.6;
    for (double x : {-0.5, 0.4})
        for (double t : {0.1, 0.25}) {
            CHECK(residual([](double x, double t) { return seg_none(1, 0.5, x, t); }, [](double) { return 0.0; }, x,
                           t) <= 1e-8);
            CHECK(residual([&](double x, double t) { return seg_const(1, 0.5, k, x, t); },
                           [&](double) { return k; }, x, t) <= 1e-8);
            CHECK(residual([&](double x, double t) { return seg_lin(1, 0.5, k, x, t); },
                           [&](double x) { return k * k * x; }, x, t) <= 1e-8);
            for (const auto& p : {PressureSpec::none(), PressureSpec::constant(k), PressureSpec::linear_in_x(k)})
                CHECK(residual([&](double x, double t) { return lambert_front(1, 1, p, x, t, Branch::W0); },
                               [&](double x) { return p.g(x); }, x - 1.0, t) <= 1e-8);
        }
}

TEST_CASE("break times")
{
    auto ratio = [](const Profile& p, const PressureSpec& g, double x) {
        return break_time_ratio(build_series(p, g, x, 40));
    };
    CHECK(ratio(LinearSegment{1.0, 2.0}, PressureSpec::none(), 0.0) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(ratio(LinearSegment{1.0, 1.0}, PressureSpec::linear_in_x(1.0), 0.0) ==
          doctest::Approx(std::numbers::pi / 4).epsilon(0.02));
    CHECK(ratio(Exponential{1.0, 1.0}, PressureSpec::none(), 0.0) == doctest::Approx(1 / e).epsilon(0.02));
    CHECK(ratio(Exponential{2.0, 0.5}, PressureSpec::none(), -0.3) ==
          doctest::Approx(0.25 * std::exp(-1 + 0.6)).epsilon(0.02));
    CHECK(ratio(LinearSegment{1.0, 2.0}, PressureSpec::constant(0.4), 0.0) == doctest::Approx(0.5).epsilon(0.02));

    CHECK(break_time_closed(LinearSegment{0.0, 2.0}, PressureSpec::none(), 0.0) == doctest::Approx(0.5));
    CHECK(break_time_closed(Exponential{1.0, 1.0}, PressureSpec::none(), 0.0) == doctest::Approx(1 / e));
    CHECK(break_time_closed(Exponential{1.0, 1.0}, PressureSpec::constant(1e-7), 0.0) ==
          doctest::Approx(1 / e).epsilon(1e-6));
    CHECK(break_time_closed(LinearSegment{0.0, 1.0}, PressureSpec::linear_in_x(2.0), 0.0) ==
          doctest::Approx(std::atan(2.0) / 2.0));

    // The implicit driven conditions hold at the returned time.
    const double k = 0.8, x = 0.2;
    const double tc = break_time_closed(Exponential{1.0, 1.0}, PressureSpec::constant(k), x);
    CHECK(tc == doctest::Approx(std::exp(-1.0) * std::exp(-(x + 0.5 * k * tc * tc))).epsilon(1e-10));
    const double tl = break_time_closed(Exponential{1.0, 1.0}, PressureSpec::linear_in_x(k), x);
    CHECK(std::tan(k * tl) == doctest::Approx(k / e * std::exp(-x / std::cos(k * tl))).epsilon(1e-10));
    CHECK(ratio(Exponential{1.0, 1.0}, PressureSpec::constant(k), x) == doctest::Approx(tc).epsilon(0.02));
    CHECK(ratio(Exponential{1.0, 1.0}, PressureSpec::linear_in_x(k), x) == doctest::Approx(tl).epsilon(0.02));

    for (const Profile& p : {Profile(LinearSegment{1.0, 0.0}), Profile(LinearSegment{1.0, -1.0}),
                             Profile(Exponential{-1.0, 1.0})}) {
        try {
            break_time_closed(p, PressureSpec::none(), 0.0);
            FAIL("expected NoBreak");
        } catch (const Error& err) {
            CHECK(err.code() == ErrorCode::NoBreak);
        }
    }
}

TEST_CASE("ratio test needs enough coefficients")
{
    CHECK_THROWS_AS(break_time_ratio(build_series(Exponential{1.0, 1.0}, PressureSpec::none(), 0.0, 6)), Error);
}

TEST_CASE("Lambert front examples")
{
    CHECK(lambert_front(1, 1, PressureSpec::none(), 0.0, 1 / e, Branch::W0) == doctest::Approx(e).epsilon(1e-7));
    CHECK(lambert_front(1, 1, PressureSpec::none(), 0.0, 1e-9, Branch::W0) == doctest::Approx(1.0).epsilon(1e-8));
    const double s = eval_series(build_series(Exponential{1, 1}, PressureSpec::none(), -1.0, 60), 0.2).u;
    CHECK(lambert_front(1, 1, PressureSpec::none(), -1.0, 0.2, Branch::W0) == doctest::Approx(s).epsilon(1e-12));
    CHECK_THROWS_AS(lambert_front(1, 1, PressureSpec::none(), 1.0, 1.0, Branch::W0), Error);
    // Backward time never breaks.
    CHECK(std::isfinite(lambert_front(1, 1, PressureSpec::none(), 3.0, -5.0, Branch::W0)));
}

TEST_CASE("Lambert front partial sums inside |arg| < 0.9/e")
{
    for (double x : {-2.0, -1.0, 0.0})
        for (double t : {-0.3, 0.1, 0.2}) {
            const double arg = -t * std::exp(x);
            if (std::abs(arg) >= 0.9 / e)
                continue;
            const double s = eval_series(build_series(Exponential{1, 1}, PressureSpec::none(), x, 200), t).u;
            CHECK(std::abs(s - lambert_front(1, 1, PressureSpec::none(), x, t, Branch::W0)) <= 1e-9);
        }
}

TEST_CASE("slope identity L u_x = u / (1 - t u / L)")
{
    const double A = 1.3, L = 0.8;
    for (double x : {-1.0, -0.4})
        for (double t : {0.05, 0.15}) {
            const double h = 1e-6;
            const auto f = [&](double z) { return lambert_front(A, L, PressureSpec::none(), z, t, Branch::W0); };
            const double u = f(x);
            const double ux = (f(x + h) - f(x - h)) / (2 * h);
            CHECK(std::abs(L * ux - u / (1 - t * u / L)) <= 1e-6);
        }
}

TEST_CASE("front face")
{
    CHECK(std::abs(front_face_position(1, 1, 1 / e)) <= 1e-12);
    CHECK(front_face_position(1, 1, 1) == doctest::Approx(-1.0));
    CHECK(std::abs(front_face_position(e, 1, 1 / (e * e))) <= 1e-12);
    CHECK_THROWS_AS(front_face_position(1, 1, 0.0), Error);
    // The slope of the front grows without bound as the face is approached.
    const double t = 1 / (e * e);
    auto slope = [&](double d) {
        const double h = d * 1e-3;
        auto f = [&](double z) { return lambert_front(e, 1, PressureSpec::none(), z, t, Branch::W0); };
        return (f(-d + h) - f(-d - h)) / (2 * h);
    };
    CHECK(slope(1e-4) > 10 * slope(1e-2));
}
