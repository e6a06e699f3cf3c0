#include "mongelab/cli.hpp"

#include "mongelab/bateman.hpp"
#include "mongelab/characteristics.hpp"
#include "mongelab/error.hpp"
#include "mongelab/extradim.hpp"
#include "mongelab/implicit.hpp"
#include "mongelab/lambertw.hpp"
#include "mongelab/quantum.hpp"
#include "mongelab/series.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

namespace mongelab::cli {

namespace {

class Recorder {
public:
    Recorder(VerifyReport& r, std::optional<double> tol) : report_(r), tol_(tol) {}

    void check(const std::string& suite, const std::string& name, const std::function<double()>& measure,
               double bound)
    {
        const double b = tol_.value_or(bound);
        double v;
        try {
            v = measure();
        } catch (const Error&) {
            v = INFINITY;
        }
        report_.checks.push_back({suite, name, v, b, std::isfinite(v) && v <= b});
    }

private:
    VerifyReport& report_;
    std::optional<double> tol_;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

void lambertw_suite(Recorder& r)
{
    r.check("lambertw", "identity W0", [] {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double z = -std::exp(-1.0) + std::pow(10.0, -12.0 + 14.0 * i / 999.0);
            const double w = lambert_w(Branch::W0, z);
            worst = std::max(worst, std::abs(w * std::exp(w) - z) / std::max(1.0, std::abs(z)));
        }
        return worst;
    }, 1e-12);
    r.check("lambertw", "identity W-1", [] {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double z = -std::exp(-1.0) * (1.0 - i / 1000.0) - 1e-300;
            const double w = lambert_w(Branch::Wm1, z);
            worst = std::max(worst, std::abs(w * std::exp(w) - z) / std::max(1.0, std::abs(z)));
        }
        return worst;
    }, 1e-12);
    r.check("lambertw", "series vs iteration", [] {
        double worst = 0.0;
        const double zmax = 0.2 / std::numbers::e;
        for (int i = 0; i <= 200; ++i) {
            const double z = -zmax + 2 * zmax * i / 200.0;
            worst = std::max(worst, std::abs(lambert_w_series(z, 60) - lambert_w(Branch::W0, z)));
        }
        return worst;
    }, 1e-10);
}

void series_suite(Recorder& r)
{
    const Profile seg = LinearSegment{1.0, 2.0};
    r.check("series", "segment under constant driver", [&] {
        const auto p = PressureSpec::constant(0.5);
        double worst = 0.0;
        for (double x : {-0.5, 0.0, 0.7})
            for (double t : {0.1, 0.25, 0.4}) {
                const SeriesValue v = eval_series(build_series(seg, p, x, 140), t);
                worst = std::max(worst, rel(v.u, segment_closed(1.0, 2.0, p, x, t)));
            }
        return worst;
    }, 1e-10);
    r.check("series", "ratio break time 1/beta", [&] {
        return std::abs(break_time_ratio(build_series(seg, PressureSpec::none(), 0.0, 40)) - 0.5) / 0.5;
    }, 0.02);
    r.check("series", "ratio break time arctan", [&] {
        const double k = 1.0;
        const double exact = std::atan(k / 2.0) / k;
        return std::abs(break_time_ratio(build_series(seg, PressureSpec::linear_in_x(k), 0.0, 40)) - exact) / exact;
    }, 0.02);
    r.check("series", "ratio break time exponential", [] {
        const Profile e = Exponential{1.0, 1.0};
        const double x = 0.3;
        const double exact = std::exp(-1.0 - x);
        return std::abs(break_time_ratio(build_series(e, PressureSpec::none(), x, 40)) - exact) / exact;
    }, 0.02);
}

void implicit_suite(Recorder& r)
{
    r.check("implicit", "segment roots", [] {
        const Profile seg = LinearSegment{1.0, 2.0};
        double worst = 0.0;
        for (const auto& p : {PressureSpec::none(), PressureSpec::constant(0.5), PressureSpec::linear_in_x(0.8)}) {
            const auto rel_ = make_relation(p, relation_G_for_profile(seg, p));
            for (double x : {-0.5, 0.3})
                for (double t : {0.1, 0.3}) {
                    const URoots u = solve_u(rel_, x, t, default_u_range(seg, p, x, t));
                    if (u.roots.size() != 1)
                        return std::numeric_limits<double>::infinity();
                    worst = std::max(worst, rel(u.roots[0].u, segment_closed(1.0, 2.0, p, x, t)));
                }
        }
        return worst;
    }, 1e-10);
    const double k = 0.8;
    const auto lin = PressureSpec::linear_in_x(k);
    r.check("implicit", "hodograph quadrature", [&] {
        double worst = 0.0;
        for (double x : {-0.7, 0.4, 1.1})
            for (double u : {0.5, 1.5}) {
                const double exact = -std::asin(k * x / std::hypot(u, k * x)) / k;
                worst = std::max(worst, std::abs(hodograph_time(FunctionHandle::zero(), lin, x, u) - exact));
            }
        return worst;
    }, 1e-10);
    r.check("implicit", "hodograph zero-F roots", [&] {
        double worst = 0.0;
        for (double x : {0.3, 0.9})
            for (double t : {-0.6, -0.2}) {
                const auto h = invert_hodograph(FunctionHandle::zero(), lin, x, t, {1e-3, 20.0});
                if (h.u.empty())
                    return std::numeric_limits<double>::infinity();
                for (double u : h.u)
                    worst = std::max(worst, std::abs(k * x * std::cos(k * t) + u * std::sin(k * t)));
            }
        return worst;
    }, 1e-9);
}

void characteristics_suite(Recorder& r, bool flip)
{
    const double sgn = flip ? -1.0 : 1.0;
    r.check("characteristics", "segment under constant driver", [&] {
        const Profile seg = LinearSegment{1.0, 2.0};
        const double k = 0.5;
        double worst = 0.0;
        for (double x : {-0.5, 0.2})
            for (double t : {0.1, 0.35}) {
                const PointValues pv = solve_at(seg, PressureSpec::constant(sgn * k), x, t);
                if (pv.u.size() != 1)
                    return std::numeric_limits<double>::infinity();
                worst = std::max(worst, rel(pv.u[0], segment_closed(1.0, 2.0, PressureSpec::constant(k), x, t)));
            }
        return worst;
    }, 1e-10);

    auto drift = [&](const PressureSpec& p, const PressureSpec& traced) {
        TraceOptions opt;
        opt.force_numeric = true;
        opt.rk4_steps = 4096;
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double x0 = -1.0 + 2.0 * i / 99.0;
            const double u0 = 0.3 + 0.2 * x0;
            const Phase ph = trace(x0, u0, traced, 5.0, opt);
            worst = std::max(worst, std::abs(riemann_invariant(ph.x, ph.u, p) - riemann_invariant(x0, u0, p)));
        }
        return worst;
    };
    r.check("characteristics", "Riemann drift linear driver", [&] {
        const auto p = PressureSpec::linear_in_x(0.7);
        return drift(p, flip ? PressureSpec::poly_x({0.0, -0.49}) : p);
    }, 1e-8);
    r.check("characteristics", "Riemann drift cubic driver", [&] {
        const std::vector<double> g{0.1, 0.5, 0.0, 0.3};
        std::vector<double> flipped;
        for (double c : g)
            flipped.push_back(sgn * c);
        return drift(PressureSpec::poly_x(g), PressureSpec::poly_x(flipped));
    }, 1e-8);

    const Profile bump = PiecewiseLinear{{{-1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}};
    auto fit = [&](double t) {
        const FrontCurve f = evolve_front(bump, PressureSpec::none(), t, default_seeds(bump, PressureSpec::none(), t));
        return std::pair{f, equal_area_shock(f)};
    };
    r.check("characteristics", "bump area through breaking", [&] {
        const auto [f, s] = fit(1.5);
        return std::abs(bump_area(f, s) - 1.0);
    }, 1e-6);
    r.check("characteristics", "shock speed", [&] {
        const double t = 1.5, h = 1e-3;
        const double speed = (fit(t + h).second.position - fit(t - h).second.position) / (2 * h);
        const auto s = fit(t).second;
        return std::abs(speed + (s.u_left + s.u_right) / 2);
    }, 1e-4);
}

void extradim_suite(Recorder& r)
{
    r.check("extradim", "kernel vs series coefficients", [] {
        double worst = 0.0;
        const Profile seg = LinearSegment{1.0, 2.0};
        const Profile ex = Exponential{1.0, 1.0};
        for (const auto& p : {PressureSpec::none(), PressureSpec::constant(0.5), PressureSpec::linear_in_x(0.8)})
            for (const Profile* prof : {&seg, &ex}) {
                const auto kernel = time_taylor(*prof, p, 0.2, 12);
                const auto series = build_series(*prof, p, 0.2, 12);
                for (int n = 0; n <= 12; ++n) {
                    const double a = kernel[static_cast<std::size_t>(n)].value();
                    const double b = series.at(n);
                    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
                }
            }
        return worst;
    }, 1e-13);
    r.check("extradim", "operator algebra", [] {
        const AlgebraCheck a = algebra_check(10, 10, 0.3);
        return std::max({a.ab_minus_a, a.ac, a.bc});
    }, 1e-12);
    r.check("extradim", "kernel diffusion residual", [] {
        const DoubledField f = lift(Exponential{1.0, 1.0}, PressureSpec::none(), 0.2, 16, 16);
        return diffusion_residual(evolve(f, 0.1), 0.0);
    }, 1e-10);
    r.check("extradim", "operator-generated solutions", [] {
        const DoubledField f = evolve(lift(Exponential{1.0, 1.0}, PressureSpec::none(), 0.2, 12, 12), 0.1);
        double worst = 0.0;
        for (const OperatorWord& w : {OperatorWord{Generator::Dx}, OperatorWord{Generator::Da},
                                      OperatorWord{Generator::Boost}, OperatorWord{Generator::Dt, Generator::Dx}})
            worst = std::max(worst, diffusion_residual(solution_family(f, w), 0.0));
        return worst;
    }, 1e-10);
    const SolutionHandle undriven{[](double x, double t) { return (1.0 - 0.5 * x) / (1.0 + 0.5 * t); }};
    r.check("extradim", "constant covariance", [&] {
        const double k = 0.6;
        return pde_residual(covariance_const(undriven, k), [k](double, double) { return k; });
    }, 1e-8);
    r.check("extradim", "linear covariance", [&] {
        const double k = 0.6;
        return pde_residual(covariance_linear(undriven, k), [k](double x, double) { return k * k * x; });
    }, 1e-8);
    r.check("extradim", "tan transport pair", [] {
        const auto [u, v] = tan_pair(0.7);
        return verify_v_factor(u, v, Grid{});
    }, 1e-10);
    r.check("extradim", "cot transport pair", [] {
        const auto [u, v] = cot_pair(0.7);
        return verify_v_factor(u, v, Grid{});
    }, 1e-10);
}

void bateman_suite(Recorder& r)
{
    for (const auto& [name, field] : {std::pair{"quadratic potential", quadratic_phi(0.7)},
                                      std::pair{"root potential", root_phi(0.7)}})
        r.check("bateman", name, [&, f = field] {
            double worst = 0.0;
            for (double x : {-0.8, 0.3, 1.2})
                for (double t : {0.4, 1.1})
                    worst = std::max(worst, bateman_residual(f, 0.7, x, t));
            return worst;
        }, 1e-8);
    r.check("bateman", "implicit families", [] {
        PhiSolution sols[3];
        sols[0] = {FunctionHandle::polynomial({0.0, 1.0}), FunctionHandle::polynomial({0.0, 0.0, 1.0}), 1.0,
                   PhiSolution::Variant::Classic, 0.0};
        sols[1] = {FunctionHandle::polynomial({0.0, 1.0}), FunctionHandle::polynomial({0.0, 0.0, 1.0}), 1.0,
                   PhiSolution::Variant::ConstGrad, 0.5};
        sols[2] = {FunctionHandle::polynomial({0.0, 1.0}), FunctionHandle::polynomial({0.0, 0.0, 1.0}), 1.0,
                   PhiSolution::Variant::LinGrad, 0.5};
        double worst = 0.0;
        for (const auto& s : sols)
            for (double x : {0.4, 1.3})
                for (double t : {0.3, 0.9})
                    for (double phi : solve_phi(s, x, t, {-10.0, 10.0}))
                        worst = std::max(worst, bateman_residual(implicit_derivatives(s, x, t, phi), s.g(x)));
        return worst;
    }, 1e-8);
    r.check("bateman", "u from potential solves the equation", [] {
        const ScalarField f = root_phi(0.7);
        const auto u = [&](double x, double t) { return u_from_phi(f.ft(x, t), f.fx(x, t)); };
        double worst = 0.0;
        for (double x : {-0.8, 0.3, 1.2})
            for (double t : {0.4, 1.1})
                worst = std::max(worst, pde_residual_at(u, [](double, double) { return 0.7; }, x, t));
        return worst;
    }, 1e-7);
}

void quantum_suite(Recorder& r)
{
    const WaveSpec specs[] = {{PlaneWave{1.3}, 0.5}, {GaussianPacket{1.0, 0.7, 0.2}, 0.5}};
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> pos(-3.0, 3.0), tim(0.0, 2.0);
    std::vector<std::array<double, 3>> pts(50);
    for (auto& p : pts)
        p = {pos(rng), tim(rng), pos(rng)};
    r.check("quantum", "continuity", [&] {
        double worst = 0.0;
        for (const auto& s : specs)
            for (const auto& p : pts)
                worst = std::max(worst, continuity_residual(s, p[0], p[1], p[2]));
        return worst;
    }, 1e-10);
    r.check("quantum", "conserved tensors to order 4", [&] {
        double worst = 0.0;
        for (const auto& s : specs)
            for (int m = 0; m <= 4; ++m)
                for (const auto& p : pts)
                    worst = std::max(worst, tensor_residual(s, m, p[0], p[1], p[2]));
        return worst;
    }, 1e-10);
    r.check("quantum", "boosted density", [&] {
        double worst = 0.0;
        for (const auto& s : specs)
            for (const auto& p : pts)
                worst = std::max(worst, boost_residual(s, p[0], p[1], p[2]));
        return worst;
    }, 1e-10);
}

} // namespace

VerifyReport cmd_verify(const RunConfig& cfg, const VerifyOptions& opt)
{
    cfg.validate();
    VerifyReport report;
    Recorder r(report, opt.tol);
    lambertw_suite(r);
    series_suite(r);
    implicit_suite(r);
    characteristics_suite(r, opt.flip_g_sign);
    extradim_suite(r);
    bateman_suite(r);
    quantum_suite(r);
    return report;
}

} // namespace mongelab::cli
