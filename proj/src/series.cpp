#include "mongelab/series.hpp"

#include "mongelab/error.hpp"
#include "mongelab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mongelab {

namespace {

constexpr const char* kModule = "series";
constexpr double kInvE = 0.36787944117144233;

[[noreturn]] void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, kModule, what);
}

} // namespace

std::vector<double> TimeSeries::values() const
{
    std::vector<double> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs)
        out.push_back(c.value());
    return out;
}

TimeSeries build_series(const Jet& u0, const PressureSpec& pressure, int order)
{
    if (order < 0)
        fail(ErrorCode::OrderError, "negative series order");
    if (u0.order() < 2 * order) {
        std::ostringstream os;
        os << "jet order " << u0.order() << " is below twice the series order " << order;
        fail(ErrorCode::OrderError, os.str());
    }
    TimeSeries ts;
    ts.x0 = u0.x0();
    ts.pressure = pressure;
    ts.coeffs.reserve(static_cast<std::size_t>(order) + 1);
    ts.coeffs.push_back(u0);

    Jet g_jet = Jet::zero(u0.x0(), u0.order());
    std::vector<double> k_t;
    switch (pressure.kind) {
    case PressureSpec::Kind::TimeOnly: k_t = pressure.k_coeffs; break;
    default: {
        const Polynomial g = pressure.g_polynomial();
        g_jet = g.eval(Jet::variable(u0.x0(), u0.order()));
        break;
    }
    }

    for (int n = 0; n < order; ++n) {
        // sum_j u_j u_{n-j} using the symmetry of the convolution
        Jet conv = Jet::zero(u0.x0(), u0.order() - n);
        for (int j = 0; 2 * j < n; ++j)
            conv += 2.0 * (ts.coeffs[static_cast<std::size_t>(j)] * ts.coeffs[static_cast<std::size_t>(n - j)]);
        if (n % 2 == 0)
            conv += ts.coeffs[static_cast<std::size_t>(n / 2)] * ts.coeffs[static_cast<std::size_t>(n / 2)];
        Jet next = 0.5 * conv.derivative();
        if (n == 0)
            next += g_jet;
        if (static_cast<std::size_t>(n) < k_t.size())
            next += Jet(k_t[static_cast<std::size_t>(n)]);
        next = next.truncated(u0.order() - n - 1);
        ts.coeffs.push_back((1.0 / (n + 1)) * next);
    }
    return ts;
}

TimeSeries build_series(const Profile& profile, const PressureSpec& pressure, double x0, int order, int jet_order)
{
    if (jet_order < 0)
        jet_order = std::max(32, 2 * order);
    return build_series(profile_jet(profile, x0, jet_order), pressure, order);
}

SeriesValue eval_series(const TimeSeries& ts, double t)
{
    SeriesValue r;
    const int N = ts.order();
    double sum = 0.0;
    for (int n = N; n >= 0; --n)
        sum = sum * t + ts.at(n);
    r.u = sum;
    const double last = std::abs(std::pow(t, N) * ts.at(N));
    r.err = last;
    if (N >= 1) {
        const double prev = std::abs(std::pow(t, N - 1) * ts.at(N - 1));
        r.diverging = prev > 0.0 ? (last / prev >= 1.0) : (last > 0.0);
    }
    return r;
}

double break_time_ratio(const TimeSeries& ts)
{
    const std::vector<double> a = ts.values();
    const int N = static_cast<int>(a.size()) - 1;
    const auto nonzero = std::count_if(a.begin(), a.end(), [](double v) { return v != 0.0; });
    if (nonzero < 12)
        fail(ErrorCode::InsufficientData, "ratio test needs at least 12 nonzero coefficients");
    for (int n = N - 8; n <= N; ++n)
        if (n < 0 || a[static_cast<std::size_t>(n)] == 0.0)
            fail(ErrorCode::InsufficientData, "the last nine coefficients must all be nonzero");

    // least squares r_n = c0 + c1 (1/n) over n = N-7..N
    double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0, rmax = 0;
    for (int n = N - 7; n <= N; ++n) {
        const double r = a[static_cast<std::size_t>(n)] / a[static_cast<std::size_t>(n - 1)];
        const double xi = 1.0 / n;
        s1 += 1;
        sx += xi;
        sxx += xi * xi;
        sy += r;
        sxy += xi * r;
        rmax = std::max(rmax, std::abs(r));
    }
    const double det = s1 * sxx - sx * sx;
    const double c0 = (sxx * sy - sx * sxy) / det;
    if (std::abs(c0) <= 1e-10 * std::max(1.0, rmax) || rmax == 0.0)
        return std::numeric_limits<double>::infinity();
    return 1.0 / std::abs(c0);
}

double break_time_closed(const Profile& profile, const PressureSpec& pressure, double x)
{
    using K = PressureSpec::Kind;
    if (pressure.kind != K::None && pressure.kind != K::Constant && pressure.kind != K::LinearInX)
        fail(ErrorCode::UnsupportedVariant, "closed break times exist for None, Constant and LinearInX drivers");

    if (const auto* seg = std::get_if<LinearSegment>(&profile.v)) {
        if (seg->beta <= 0.0)
            fail(ErrorCode::NoBreak, "segment slope beta <= 0 never steepens forward in time");
        if (pressure.kind == K::LinearInX && pressure.k != 0.0) {
            const double k = std::abs(pressure.k);
            return std::atan(k / seg->beta) / k;
        }
        return 1.0 / seg->beta;
    }

    const auto* ex = std::get_if<Exponential>(&profile.v);
    if (ex == nullptr)
        fail(ErrorCode::UnsupportedVariant, "closed break times need a LinearSegment or Exponential profile");
    const double A = ex->A;
    const double L = ex->L;
    if (A / L <= 0.0)
        fail(ErrorCode::NoBreak, "exponential data with A/L <= 0 never steepens forward in time");

    if (pressure.kind == K::None || pressure.k == 0.0)
        return (L / A) * std::exp(-1.0 - x / L);

    if (pressure.kind == K::Constant) {
        const double k = pressure.k;
        auto f = [&](double t) { return t - (L / (A * std::exp(1.0))) * std::exp(-(x + 0.5 * k * t * t) / L); };
        // t = 0 is negative; walk outward until the sign turns
        double lo = 0.0;
        double hi = std::max(1e-3, (L / A) * std::exp(-1.0 - x / L));
        for (int i = 0; i < 200 && f(hi) < 0.0; ++i) {
            lo = hi;
            hi *= 1.5;
            if (!std::isfinite(f(hi)))
                break;
        }
        if (!(f(hi) >= 0.0))
            fail(ErrorCode::NoBreak, "no forward break under this constant driver");
        // the first crossing, in case the walk skipped more than one
        const auto roots = numerics::find_roots(f, lo, hi, 256);
        if (roots.empty())
            fail(ErrorCode::NoBreak, "no forward break under this constant driver");
        return roots.front();
    }

    const double k = std::abs(pressure.k);
    const double tmax = 0.5 * M_PI / k;
    auto f = [&](double t) {
        const double c = std::cos(k * t);
        return std::tan(k * t) - (L * k / (A * std::exp(1.0))) * std::exp(-x / (L * c));
    };
    const int n = 4096;
    double prev_t = 0.0;
    double prev_f = f(0.0);
    for (int i = 1; i < n; ++i) {
        const double t = tmax * i / n;
        const double ft = f(t);
        if (std::isfinite(ft) && std::isfinite(prev_f) && prev_f < 0.0 && ft >= 0.0)
            return numerics::bisect(f, prev_t, t, 1e-15);
        prev_t = t;
        prev_f = ft;
    }
    fail(ErrorCode::NoBreak, "no break before cos(kt) = 0 under this linear driver");
}

double lambert_front_argument(double A, double L, const PressureSpec& pressure, double x, double t)
{
    using K = PressureSpec::Kind;
    switch (pressure.kind) {
    case K::None: return -(A * t / L) * std::exp(x / L);
    case K::Constant: return -(A * t / L) * std::exp((x + 0.5 * pressure.k * t * t) / L);
    case K::LinearInX: {
        const double k = pressure.k;
        if (k == 0.0)
            return -(A * t / L) * std::exp(x / L);
        const double c = std::cos(k * t);
        if (std::abs(c) < 1e-15)
            fail(ErrorCode::DomainError, "cos(kt) = 0");
        return -(A * std::tan(k * t) / (L * k)) * std::exp(x / (L * c));
    }
    default: break;
    }
    fail(ErrorCode::UnsupportedVariant, "Lambert fronts exist for None, Constant and LinearInX drivers");
}

double lambert_front(double A, double L, const PressureSpec& pressure, double x, double t, Branch branch)
{
    using K = PressureSpec::Kind;
    if (L == 0.0)
        fail(ErrorCode::DomainError, "L must be nonzero");
    const double z = lambert_front_argument(A, L, pressure, x, t);
    if (t == 0.0)
        return A * std::exp(x / L);
    if (z < -kInvE * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) {
        std::ostringstream os;
        os.precision(17);
        os << "point lies beyond the broken front (argument " << z << " < -1/e)";
        fail(ErrorCode::DomainError, os.str());
    }
    if (branch == Branch::Wm1 && z >= 0.0)
        fail(ErrorCode::DomainError, "lower branch needs a negative argument");
    const double w = lambert_w(branch, z);
    switch (pressure.kind) {
    case K::None: return -(L / t) * w;
    case K::Constant: return pressure.k * t - (L / t) * w;
    case K::LinearInX: {
        const double k = pressure.k;
        if (k == 0.0)
            return -(L / t) * w;
        return k * x * std::tan(k * t) - (L * k / std::sin(k * t)) * w;
    }
    default: break;
    }
    fail(ErrorCode::UnsupportedVariant, "Lambert fronts exist for None, Constant and LinearInX drivers");
}

double front_face_position(double A, double L, double t)
{
    if (!(t > 0.0))
        fail(ErrorCode::DomainError, "face position needs t > 0");
    if (!(L / A > 0.0))
        fail(ErrorCode::DomainError, "face position needs L/A > 0");
    return L * (std::log(L / A) - 1.0 - std::log(t));
}

double segment_closed(double alpha, double beta, const PressureSpec& pressure, double x, double t)
{
    using K = PressureSpec::Kind;
    switch (pressure.kind) {
    case K::None: return (alpha + beta * x) / (1.0 - beta * t);
    case K::Constant: {
        const double k = pressure.k;
        return k * t + (alpha + beta * (x + 0.5 * k * t * t)) / (1.0 - beta * t);
    }
    case K::LinearInX: {
        const double k = pressure.k;
        if (k == 0.0)
            return (alpha + beta * x) / (1.0 - beta * t);
        const double c = std::cos(k * t);
        const double s = std::sin(k * t);
        if (std::abs(k * t) >= 0.5 * M_PI)
            fail(ErrorCode::DomainError, "segment form requires |kt| < pi/2");
        return k * x * std::tan(k * t) + (alpha + beta * x / c) / (c - (beta / k) * s);
    }
    default: break;
    }
    fail(ErrorCode::UnsupportedVariant, "closed segment evolution exists for None, Constant and LinearInX drivers");
}

} // namespace mongelab
