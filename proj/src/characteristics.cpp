#include "mongelab/characteristics.hpp"

#include "mongelab/error.hpp"
#include "mongelab/kernels.hpp"
#include "mongelab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mongelab {

namespace {

constexpr const char* kModule = "characteristics";

[[noreturn]] void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, kModule, what);
}

bool closed_form(const PressureSpec& p, const TraceOptions& opt)
{
    if (p.kind == PressureSpec::Kind::TimeOnly)
        return true;
    return !opt.force_numeric && p.kind != PressureSpec::Kind::PolyX;
}

double lerp(double a, double b, double w)
{
    return a + (b - a) * w;
}

} // namespace

Phase trace(double x0, double u0, const PressureSpec& pressure, double t, const TraceOptions& opt)
{
    Phase out;
    trace_batch({&x0, 1}, {&u0, 1}, pressure, t, {&out.x, 1}, {&out.u, 1}, opt);
    return out;
}

void trace_batch(std::span<const double> x0, std::span<const double> u0, const PressureSpec& pressure, double t,
                 std::span<double> x, std::span<double> u, const TraceOptions& opt)
{
    using K = PressureSpec::Kind;
    if (pressure.kind == K::TimeOnly) {
        const Polynomial kp{pressure.k_coeffs};
        const double Kt = kp.antiderivative()(t);
        std::vector<double> shifted(pressure.k_coeffs.size() + 1, 0.0);
        std::copy(pressure.k_coeffs.begin(), pressure.k_coeffs.end(), shifted.begin() + 1);
        const double Mt = Polynomial{shifted}.antiderivative()(t);
        for (std::size_t i = 0; i < x0.size(); ++i) {
            x[i] = x0[i] - u0[i] * t - (t * Kt - Mt);
            u[i] = u0[i] + Kt;
        }
        return;
    }
    if (closed_form(pressure, opt)) {
        switch (pressure.kind) {
        case K::None: kernels::trace_affine(x0, u0, 0.0, t, x, u); return;
        case K::Constant: kernels::trace_affine(x0, u0, pressure.k, t, x, u); return;
        case K::LinearInX: kernels::trace_rotation(x0, u0, pressure.k, t, x, u); return;
        default: break;
        }
    }
    const Polynomial g = pressure.g_polynomial();
    kernels::Rk4Poly cfg{g.c, t, std::max(1, opt.rk4_steps)};
    kernels::trace_rk4_poly(cfg, x0, u0, x, u);
}

std::array<double, 4> trace_jacobian(double x0, double u0, const PressureSpec& pressure, double t,
                                     const TraceOptions& opt)
{
    using K = PressureSpec::Kind;
    if (closed_form(pressure, opt)) {
        if (pressure.kind == K::LinearInX && pressure.k != 0.0) {
            const double k = pressure.k;
            const double c = std::cos(k * t);
            const double s = std::sin(k * t);
            return {c, -s / k, k * s, c};
        }
        return {1.0, -t, 0.0, 1.0};
    }
    const double hx = 1e-6 * std::max(1.0, std::abs(x0));
    const double hu = 1e-6 * std::max(1.0, std::abs(u0));
    const Phase xp = trace(x0 + hx, u0, pressure, t, opt);
    const Phase xm = trace(x0 - hx, u0, pressure, t, opt);
    const Phase up = trace(x0, u0 + hu, pressure, t, opt);
    const Phase um = trace(x0, u0 - hu, pressure, t, opt);
    return {(xp.x - xm.x) / (2 * hx), (up.x - um.x) / (2 * hu), (xp.u - xm.u) / (2 * hx), (up.u - um.u) / (2 * hu)};
}

std::vector<double> default_seeds(const Profile& profile, const PressureSpec& pressure, double t, int n,
                                  Interval cover)
{
    if (n < 2)
        n = 2;
    Interval hint = profile.support_hint();
    if (std::isfinite(cover.lo) && std::isfinite(cover.hi)) {
        hint.lo = std::min(hint.lo, cover.lo);
        hint.hi = std::max(hint.hi, cover.hi);
    }
    const Interval vr = profile.value_range();
    const double m = std::max({std::abs(vr.lo), std::abs(vr.hi), std::abs(profile.value(hint.lo)),
                               std::abs(profile.value(hint.hi))});
    double gmax = 0.0;
    if (pressure.kind == PressureSpec::Kind::TimeOnly) {
        const double at = std::abs(t);
        for (std::size_t i = 0; i < pressure.k_coeffs.size(); ++i)
            gmax += std::abs(pressure.k_coeffs[i]) * std::pow(at, static_cast<double>(i));
    } else {
        const Polynomial g = pressure.g_polynomial();
        const double span = std::max(std::abs(hint.lo), std::abs(hint.hi)) + m * std::abs(t);
        for (std::size_t i = 0; i < g.c.size(); ++i)
            gmax += std::abs(g.c[i]) * std::pow(span, static_cast<double>(i));
    }
    const double reach = m * std::abs(t) + 0.5 * gmax * t * t + 0.5;
    double lo = hint.lo - reach;
    double hi = hint.hi + reach;
    if (std::isfinite(cover.lo) && std::isfinite(cover.hi)) {
        // Widen until neither end characteristic lands inside the cover or
        // short of it on its own side.
        auto image = [&](double s) { return trace(s, profile.value(s), pressure, t).x; };
        auto short_hi = [&] {
            const double a = image(lo), b = image(hi);
            return std::isfinite(b) && (cover.contains(b) || (b < cover.hi && b > a));
        };
        auto short_lo = [&] {
            const double a = image(lo), b = image(hi);
            return std::isfinite(a) && (cover.contains(a) || (a > cover.lo && a < b));
        };
        for (int i = 0; i < 32 && short_hi(); ++i)
            hi += 0.25 * (hi - lo);
        for (int i = 0; i < 32 && short_lo(); ++i)
            lo -= 0.25 * (hi - lo);
    }
    std::vector<double> seeds;
    seeds.reserve(static_cast<std::size_t>(n) + 8);
    for (int i = 0; i < n; ++i)
        seeds.push_back(lo + (hi - lo) * i / (n - 1));
    for (double node : profile.nodes())
        if (node > lo && node < hi)
            seeds.push_back(node);
    std::sort(seeds.begin(), seeds.end());
    const double eps = 1e-9 * (hi - lo);
    std::vector<double> out;
    for (double s : seeds) {
        if (!out.empty() && s - out.back() <= eps) {
            // keep the exact node over a grid point that nearly coincides
            bool is_node = false;
            for (double node : profile.nodes())
                if (node == s)
                    is_node = true;
            if (is_node)
                out.back() = s;
            continue;
        }
        out.push_back(s);
    }
    return out;
}

FrontCurve evolve_front(const Profile& profile, const PressureSpec& pressure, double t,
                        const std::vector<double>& seeds, const TraceOptions& opt)
{
    for (std::size_t i = 1; i < seeds.size(); ++i)
        if (!(seeds[i] > seeds[i - 1]))
            fail(ErrorCode::DomainError, "seeds must be strictly increasing");
    FrontCurve f;
    f.t = t;
    f.source = profile;
    f.pressure = pressure;
    f.options = opt;
    const std::size_t n = seeds.size();
    std::vector<double> u0(n), x(n), u(n);
    for (std::size_t i = 0; i < n; ++i)
        u0[i] = profile.value(seeds[i]);
    trace_batch(seeds, u0, pressure, t, x, u, opt);

    int sign = 0;
    int branch = 0;
    f.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const double dx = x[i] - x[i - 1];
            const int s = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
            if (s != 0) {
                if (sign != 0 && s != sign) {
                    f.turning.push_back(i - 1);
                    ++branch;
                }
                sign = s;
            }
        }
        f.samples[i] = {seeds[i], x[i], u[i], branch};
    }
    // the turning sample itself closes the previous branch
    for (std::size_t k = 0; k < f.turning.size(); ++k)
        f.samples[f.turning[k]].branch = static_cast<int>(k);
    f.multivalued = !f.turning.empty();
    f.break_detected = f.multivalued;
    return f;
}

PointValues solve_at(const Profile& profile, const PressureSpec& pressure, double x, double t,
                     const TraceOptions& opt, int n_seeds)
{
    const auto seeds = default_seeds(profile, pressure, t, n_seeds, {x, x});
    return solve_on_front(evolve_front(profile, pressure, t, seeds, opt), x);
}

PointValues solve_on_front(const FrontCurve& f, double x)
{
    if (!f.source)
        fail(ErrorCode::DomainError, "the front carries no source profile");
    const Profile& profile = *f.source;
    auto g = [&](double s) { return trace(s, profile.value(s), f.pressure, f.t, f.options).x - x; };
    std::vector<double> seeds;
    for (std::size_t i = 0; i + 1 < f.samples.size(); ++i) {
        const double a = f.samples[i].x - x;
        const double b = f.samples[i + 1].x - x;
        if (a == 0.0)
            seeds.push_back(f.samples[i].seed);
        else if ((a < 0) != (b < 0) && b != 0.0)
            seeds.push_back(numerics::bisect(g, f.samples[i].seed, f.samples[i + 1].seed, 1e-16));
    }
    if (!f.samples.empty() && f.samples.back().x == x)
        seeds.push_back(f.samples.back().seed);
    std::vector<std::pair<double, double>> pairs;
    for (double s : seeds)
        pairs.push_back({trace(s, profile.value(s), f.pressure, f.t, f.options).u, s});
    std::sort(pairs.begin(), pairs.end());
    PointValues out;
    for (const auto& p : pairs) {
        out.u.push_back(p.first);
        out.seeds.push_back(p.second);
    }
    return out;
}

double riemann_invariant(double x, double u, const PressureSpec& pressure)
{
    if (pressure.kind == PressureSpec::Kind::TimeOnly)
        fail(ErrorCode::UnsupportedVariant, "no time-independent invariant for a TimeOnly driver");
    return 0.5 * u * u + pressure_at(pressure, x);
}

namespace {

// Geometry of one S-shaped fold, either on the sampled polyline or, when the
// source profile is available, on the exact trace map.
class FoldGeometry {
public:
    explicit FoldGeometry(const FrontCurve& f) : f_(f)
    {
        if (f.turning.empty())
            fail(ErrorCode::NotMultivalued, "front is single valued");
        if (f.turning.size() == 1)
            fail(ErrorCode::NotMultivalued, "the fold never closes: no vertical chord crosses the curve three times");
        if (f.turning.size() > 2)
            fail(ErrorCode::MultipleFolds, "more than one overturned fold");
        exact_ = f.source.has_value();
        i1_ = f.turning[0];
        i2_ = f.turning[1];
        if (exact_) {
            tau1_ = refine_turning(i1_);
            tau2_ = refine_turning(i2_);
        } else {
            tau1_ = f.samples[i1_].seed;
            tau2_ = f.samples[i2_].seed;
        }
        xA_ = x_of(tau1_);
        xB_ = x_of(tau2_);
        increasing_first_ = f.samples[i1_].x > f.samples.front().x;
    }

    double lo() const { return std::min(xA_, xB_); }
    double hi() const { return std::max(xA_, xB_); }
    bool increasing_first() const { return increasing_first_; }

    double x_of(double s) const
    {
        if (exact_)
            return point(s).x;
        return interp(s).x;
    }

    Phase point(double s) const
    {
        if (exact_)
            return trace(s, f_.source->value(s), f_.pressure, f_.t, f_.options);
        return interp(s);
    }

    /// Seeds where the curve crosses x = X on each of the three pieces.
    std::array<double, 3> crossings(double X) const
    {
        const double s_lo = f_.samples.front().seed;
        const double s_hi = f_.samples.back().seed;
        return {cross(X, s_lo, tau1_), cross(X, tau1_, tau2_), cross(X, tau2_, s_hi)};
    }

    /// int_{s1}^{s3} u x'(s) ds
    double lobe_area(double s1, double s3) const
    {
        if (!exact_)
            return polyline_area(s1, s3);
        std::vector<double> cuts{s1};
        for (double node : f_.source->nodes())
            if (node > s1 && node < s3)
                cuts.push_back(node);
        cuts.push_back(s3);
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            total += numerics::integrate([&](double s) { return integrand(s); }, cuts[i], cuts[i + 1], 1e-13).value;
        return total;
    }

    double polyline_area(double s1, double s3) const
    {
        const auto& S = f_.samples;
        double total = 0.0;
        Phase prev = interp(s1);
        for (const auto& smp : S) {
            if (smp.seed <= s1)
                continue;
            if (smp.seed >= s3)
                break;
            total += (smp.x - prev.x) * (smp.u + prev.u) * 0.5;
            prev = {smp.x, smp.u};
        }
        const Phase last = interp(s3);
        total += (last.x - prev.x) * (last.u + prev.u) * 0.5;
        return total;
    }

    Phase interp(double s) const
    {
        const auto& S = f_.samples;
        if (s <= S.front().seed)
            return {S.front().x, S.front().u};
        if (s >= S.back().seed)
            return {S.back().x, S.back().u};
        auto it = std::upper_bound(S.begin(), S.end(), s, [](double v, const FrontSample& p) { return v < p.seed; });
        const auto& b = *it;
        const auto& a = *(it - 1);
        const double w = (s - a.seed) / (b.seed - a.seed);
        return {lerp(a.x, b.x, w), lerp(a.u, b.u, w)};
    }

private:
    double xprime(double s) const
    {
        const double u0 = f_.source->value(s);
        const auto J = trace_jacobian(s, u0, f_.pressure, f_.t, f_.options);
        return J[0] + J[1] * f_.source->slope(s);
    }

    double integrand(double s) const
    {
        const double u0 = f_.source->value(s);
        const auto J = trace_jacobian(s, u0, f_.pressure, f_.t, f_.options);
        const double du0 = f_.source->slope(s);
        const double u = trace(s, u0, f_.pressure, f_.t, f_.options).u;
        return u * (J[0] + J[1] * du0);
    }

    double refine_turning(std::size_t i) const
    {
        const auto& S = f_.samples;
        const double a = S[i > 0 ? i - 1 : 0].seed;
        const double b = S[std::min(i + 1, S.size() - 1)].seed;
        const double fa = xprime(a);
        const double fb = xprime(b);
        if ((fa < 0) == (fb < 0))
            return S[i].seed;
        return numerics::bisect([&](double s) { return xprime(s); }, a, b, 1e-15);
    }

    double cross(double X, double a, double b) const
    {
        const double fa = x_of(a) - X;
        const double fb = x_of(b) - X;
        if (fa == 0.0)
            return a;
        if (fb == 0.0)
            return b;
        if ((fa < 0) == (fb < 0))
            return std::abs(fa) < std::abs(fb) ? a : b;
        return numerics::bisect([&](double s) { return x_of(s) - X; }, a, b, 1e-15);
    }

    const FrontCurve& f_;
    bool exact_ = false;
    std::size_t i1_ = 0, i2_ = 0;
    double tau1_ = 0, tau2_ = 0;
    double xA_ = 0, xB_ = 0;
    bool increasing_first_ = true;
};

} // namespace

ShockFit equal_area_shock(const FrontCurve& front)
{
    const FoldGeometry geo(front);
    auto area = [&](double X) {
        const auto c = geo.crossings(X);
        return geo.lobe_area(c[0], c[2]);
    };
    const double lo = geo.lo();
    const double hi = geo.hi();
    const double flo = area(lo);
    const double fhi = area(hi);
    if ((flo < 0) == (fhi < 0) && flo != 0.0 && fhi != 0.0)
        fail(ErrorCode::NotMultivalued, "lobe areas do not change sign across the fold");
    const double X = numerics::bisect(area, lo, hi, 1e-15);
    const auto c = geo.crossings(X);
    ShockFit fit;
    fit.position = X;
    fit.seed_left = c[0];
    fit.seed_mid = c[1];
    fit.seed_right = c[2];
    const Phase p1 = geo.point(c[0]);
    const Phase p2 = geo.point(c[1]);
    const Phase p3 = geo.point(c[2]);
    fit.u_left = geo.increasing_first() ? p1.u : p3.u;
    fit.u_right = geo.increasing_first() ? p3.u : p1.u;
    fit.u_mid = p2.u;
    fit.area_residual = area(X);
    return fit;
}

double bump_area(const FrontCurve& front)
{
    double total = 0.0;
    const auto& S = front.samples;
    for (std::size_t i = 1; i < S.size(); ++i)
        total += (S[i].x - S[i - 1].x) * (S[i].u + S[i - 1].u) * 0.5;
    return total;
}

double bump_area(const FrontCurve& front, const ShockFit& shock)
{
    FrontCurve sampled = front;
    sampled.source.reset();
    const FoldGeometry geo(sampled);
    const auto& S = front.samples;
    const double s1 = std::min(shock.seed_left, shock.seed_right);
    const double s3 = std::max(shock.seed_left, shock.seed_right);
    // the cut lobe has zero area, so the fitted profile keeps the rest
    double total = 0.0;
    for (std::size_t i = 1; i < S.size(); ++i) {
        const double a = S[i - 1].seed;
        const double b = S[i].seed;
        auto piece = [&](double lo, double hi) {
            if (hi <= lo)
                return 0.0;
            const Phase pa = geo.interp(lo);
            const Phase pb = geo.interp(hi);
            return (pb.x - pa.x) * (pb.u + pa.u) * 0.5;
        };
        total += piece(a, std::min(b, s1));
        total += piece(std::max(a, s3), b);
    }
    return total;
}

} // namespace mongelab
