#include "mongelab/implicit.hpp"
#include "mongelab/series.hpp"

#include "mongelab/error.hpp"
#include "mongelab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mongelab {

namespace {

constexpr const char* kModule = "implicit";

[[noreturn]] void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, kModule, what);
}

// int_0^t k(s) ds and int_0^t k(s) s ds for k(s) = sum c_i s^i
double k_integral(const std::vector<double>& c, double t)
{
    return Polynomial{c}.antiderivative()(t);
}

double k_moment(const std::vector<double>& c, double t)
{
    std::vector<double> shifted(c.size() + 1, 0.0);
    std::copy(c.begin(), c.end(), shifted.begin() + 1);
    return Polynomial{shifted}.antiderivative()(t);
}

} // namespace

Affine ImplicitRelation::lhs(double x, double t) const
{
    using K = PressureSpec::Kind;
    const double k = pressure_.k;
    switch (pressure_.kind) {
    case K::None: return {x, t};
    case K::Constant: return {x - 0.5 * k * t * t, t};
    case K::LinearInX: return {k * x * std::cos(k * t), std::sin(k * t)};
    case K::TimeOnly: return {x - k_moment(pressure_.k_coeffs, t), t};
    case K::PolyX: break;
    }
    fail(ErrorCode::UnsupportedVariant, "no implicit pair for PolyX");
}

Affine ImplicitRelation::arg(double x, double t) const
{
    using K = PressureSpec::Kind;
    const double k = pressure_.k;
    switch (pressure_.kind) {
    case K::None: return {0.0, 1.0};
    case K::Constant: return {-k * t, 1.0};
    case K::LinearInX: return {k * x * std::sin(k * t), -std::cos(k * t)};
    case K::TimeOnly: return {-k_integral(pressure_.k_coeffs, t), 1.0};
    case K::PolyX: break;
    }
    fail(ErrorCode::UnsupportedVariant, "no implicit pair for PolyX");
}

double ImplicitRelation::residual(double x, double t, double u) const
{
    return lhs(x, t)(u) - G_.value(arg(x, t)(u));
}

double ImplicitRelation::pair_residual() const
{
    // A level set P(x,t,u) = c solves u_t = u u_x + g iff -P_t + u P_x = g P_u.
    double worst = 0.0;
    const double k = std::abs(pressure_.k);
    const double t_hi = (pressure_.kind == PressureSpec::Kind::LinearInX && k > 0) ? std::min(1.0, 1.0 / k) : 1.0;
    const double h = 1e-5;
    const double us[] = {-0.7, 0.3, 1.3};
    for (int member = 0; member < 2; ++member) {
        auto P = [&](double x, double t, double u) { return member == 0 ? lhs(x, t)(u) : arg(x, t)(u); };
        for (int i = 0; i < 10; ++i) {
            const double x = -1.0 + 2.0 * i / 9.0;
            for (int j = 0; j < 10; ++j) {
                const double t = 0.05 + (t_hi - 0.1) * j / 9.0;
                for (double u : us) {
                    const double Px = (P(x + h, t, u) - P(x - h, t, u)) / (2 * h);
                    const double Pt = (P(x, t + h, u) - P(x, t - h, u)) / (2 * h);
                    const double Pu = member == 0 ? lhs(x, t).c1 : arg(x, t).c1;
                    if (std::abs(Pu) < 1e-3)
                        continue;
                    const double r = (-Pt + u * Px) / Pu - pressure_.g(x, t);
                    worst = std::max(worst, std::abs(r));
                }
            }
        }
    }
    return worst;
}

ImplicitRelation make_relation(const PressureSpec& pressure, const FunctionHandle& G)
{
    if (pressure.kind == PressureSpec::Kind::PolyX)
        fail(ErrorCode::UnsupportedVariant, "PolyX drivers have no implicit pair; use the hodograph form");
    ImplicitRelation rel(pressure, G);
    const double r = rel.pair_residual();
    if (!(r < 1e-8)) {
        std::ostringstream os;
        os << "pair residual " << r << " exceeds 1e-8";
        fail(ErrorCode::ResidualError, os.str());
    }
    return rel;
}

FunctionHandle relation_G_for_profile(const Profile& profile, const PressureSpec& pressure)
{
    // The relation reads x0 = G(u0) except under LinearInX, where k x0 = G(-u0).
    const bool rotated = pressure.kind == PressureSpec::Kind::LinearInX;
    const double k = pressure.k;
    if (const auto* s = std::get_if<LinearSegment>(&profile.v)) {
        if (s->beta == 0.0)
            fail(ErrorCode::UnsupportedVariant, "a flat segment has no inverse");
        if (rotated)
            return FunctionHandle::polynomial({-k * s->alpha / s->beta, -k / s->beta});
        return FunctionHandle::polynomial({-s->alpha / s->beta, 1.0 / s->beta});
    }
    if (const auto* e = std::get_if<Exponential>(&profile.v)) {
        if (rotated)
            return FunctionHandle::log_form(k * e->L, -e->A);
        return FunctionHandle::log_form(e->L, e->A);
    }
    if (const auto* p = std::get_if<PiecewiseLinear>(&profile.v)) {
        std::vector<double> us, xs;
        for (const auto& n : p->nodes) {
            us.push_back(n.second);
            xs.push_back(n.first);
        }
        const bool inc = std::is_sorted(us.begin(), us.end(), std::less_equal<>());
        const bool dec = std::is_sorted(us.begin(), us.end(), std::greater_equal<>());
        if (!inc && !dec)
            fail(ErrorCode::UnsupportedVariant, "piecewise profile is not strictly monotone");
        if (dec) {
            std::reverse(us.begin(), us.end());
            std::reverse(xs.begin(), xs.end());
        }
        if (rotated) {
            std::vector<double> vs, ks;
            for (std::size_t i = us.size(); i-- > 0;) {
                vs.push_back(-us[i]);
                ks.push_back(k * xs[i]);
            }
            return FunctionHandle::tabulated(vs, ks);
        }
        return FunctionHandle::tabulated(us, xs);
    }
    fail(ErrorCode::UnsupportedVariant, "no inverse available for this profile");
}

URoots solve_u(const ImplicitRelation& rel, double x, double t, Interval u_range, int n_scan)
{
    if (n_scan < 2)
        fail(ErrorCode::DomainError, "n_scan must be at least 2");
    const Affine a = rel.arg(x, t);
    const Interval dom = rel.G().domain();
    Interval ur = u_range;
    if (a.c1 != 0.0) {
        double lo = (dom.lo - a.c0) / a.c1;
        double hi = (dom.hi - a.c0) / a.c1;
        if (lo > hi)
            std::swap(lo, hi);
        ur.lo = std::max(ur.lo, lo);
        ur.hi = std::min(ur.hi, hi);
    }
    URoots out;
    if (!(ur.hi > ur.lo) || !std::isfinite(ur.lo) || !std::isfinite(ur.hi))
        return out;
    // open domain ends: step just inside
    const double pad = 1e-13 * std::max(1.0, ur.width());
    if (ur.lo == (dom.lo - a.c0) / a.c1 || ur.lo == (dom.hi - a.c0) / a.c1)
        ur.lo += pad;
    if (ur.hi == (dom.lo - a.c0) / a.c1 || ur.hi == (dom.hi - a.c0) / a.c1)
        ur.hi -= pad;

    auto f = [&](double u) { return rel.residual(x, t, u); };
    auto on_nan = [&](double u) {
        const double v = rel.G().value(a(u));
        if (std::isnan(v)) {
            std::ostringstream os;
            os.precision(17);
            os << "G is not finite at argument " << a(u);
            fail(ErrorCode::NonFinite, os.str());
        }
    };
    const auto roots = numerics::find_roots(f, ur.lo, ur.hi, n_scan, 1e-15, on_nan);
    for (std::size_t i = 0; i < roots.size(); ++i)
        out.roots.push_back({roots[i], static_cast<int>(i)});
    out.no_root = out.roots.empty();
    return out;
}

Interval default_u_range(const Profile& profile, const PressureSpec& pressure, double x, double t)
{
    const Interval r = profile.value_range();
    const double m = std::max({std::abs(r.lo), std::abs(r.hi), 1e-3});
    double slack = 0.0;
    switch (pressure.kind) {
    case PressureSpec::Kind::Constant: slack = std::abs(pressure.k * t); break;
    case PressureSpec::Kind::LinearInX: slack = std::abs(pressure.k) * (std::abs(x) + m) * std::abs(std::tan(pressure.k * t)) + std::abs(pressure.k * t); break;
    case PressureSpec::Kind::TimeOnly: slack = std::abs(k_integral(pressure.k_coeffs, t)); break;
    default: break;
    }
    Interval r3{-3.0 * m - slack, 3.0 * m + slack};
    // The upper Lambert branch of exponential data runs far outside the
    // profile's value range.
    if (const auto* e = std::get_if<Exponential>(&profile.v); e && t != 0.0) {
        try {
            const double z = lambert_front_argument(e->A, e->L, pressure, x, t);
            if (z > -std::exp(-1.0) && z < 0.0) {
                const double u = lambert_front(e->A, e->L, pressure, x, t, Branch::Wm1);
                if (std::isfinite(u)) {
                    r3.lo = std::min(r3.lo, u - 0.25 * std::abs(u) - slack);
                    r3.hi = std::max(r3.hi, u + 0.25 * std::abs(u) + slack);
                }
            }
        } catch (const Error&) {
        }
    }
    return r3;
}

double hodograph_argument(const PressureSpec& pressure, double x, double u)
{
    const double r = u * u + 2.0 * (pressure_at(pressure, x) - pressure_at(pressure, 0.0));
    return std::copysign(std::sqrt(std::max(r, 0.0)), u);
}

double hodograph_time(const FunctionHandle& F, const PressureSpec& pressure, double x, double u, double tol)
{
    if (pressure.kind == PressureSpec::Kind::TimeOnly)
        fail(ErrorCode::UnsupportedVariant, "the hodograph form needs g = g(x)");
    if (std::abs(u) < 1e-12)
        fail(ErrorCode::ZeroVelocity, "u = 0 has no hodograph time");
    const double px = pressure_at(pressure, x);
    const double u2 = u * u;
    auto radicand = [&](double z) { return 1.0 + 2.0 * (px - pressure_at(pressure, z)) / u2; };
    constexpr int samples = 256;
    for (int i = 0; i <= samples; ++i) {
        const double z = x * i / samples;
        if (!(radicand(z) > 0.0)) {
            std::ostringstream os;
            os.precision(17);
            os << "radicand vanishes on [0, x] at z = " << z << " for u = " << u;
            fail(ErrorCode::TurningPoint, os.str());
        }
    }
    const auto q = numerics::integrate([&](double z) { return 1.0 / std::sqrt(radicand(z)); }, 0.0, x, tol);
    const double arg = u * std::sqrt(radicand(0.0));
    return F.value(arg) - q.value / u;
}

HodographRoots invert_hodograph(const FunctionHandle& F, const PressureSpec& pressure, double x, double t,
                                Interval u_range, int n_scan)
{
    HodographRoots out;
    if (!(u_range.hi > u_range.lo))
        return out;
    auto f = [&](double u) -> double {
        try {
            return hodograph_time(F, pressure, x, u) - t;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::TurningPoint || e.code() == ErrorCode::ZeroVelocity) {
                out.truncated = true;
                return std::numeric_limits<double>::quiet_NaN();
            }
            throw;
        }
    };
    const auto brackets = numerics::scan_brackets(f, u_range.lo, u_range.hi, n_scan);
    for (const auto& br : brackets) {
        const double u = br.lo == br.hi ? br.lo : numerics::bisect(f, br.lo, br.hi, 1e-15);
        const double r = f(u);
        // brackets straddling u = 0 are poles of -x/u, not roots
        if (std::isfinite(r) && std::abs(r) <= 1e-8 * std::max(1.0, std::abs(t)))
            out.u.push_back(u);
    }
    std::sort(out.u.begin(), out.u.end());
    out.no_root = out.u.empty();
    return out;
}

} // namespace mongelab
