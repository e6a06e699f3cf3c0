#include "mongelab/model.hpp"

#include <algorithm>
#include <sstream>

namespace mongelab {

namespace {

constexpr const char* kModule = "model";

[[noreturn]] void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, kModule, what);
}

bool near_node(double x, double node)
{
    return std::abs(x - node) <= 1e-12 * std::max(1.0, std::abs(node));
}

[[noreturn]] void kink(double x, double node)
{
    std::ostringstream os;
    os.precision(17);
    os << "expansion point " << x << " coincides with node " << node;
    fail(ErrorCode::KinkError, os.str());
}

template <class T>
std::vector<T> constant_coeffs(double u, int order)
{
    std::vector<T> out(static_cast<std::size_t>(order) + 1, T(0.0));
    out[0] = T(u);
    return out;
}

template <class T>
std::vector<T> exp_coeffs(double A, double L, const T& X, int order)
{
    using std::exp;
    std::vector<T> out(static_cast<std::size_t>(order) + 1, T(0.0));
    T e = T(A) * exp(X * (1.0 / L));
    double scale = 1.0;
    for (int i = 0; i <= order; ++i) {
        out[static_cast<std::size_t>(i)] = e * scale;
        scale /= (L * (i + 1));
    }
    return out;
}

// Index of the segment containing x, or -1 / size() when outside.
long exp_segment_index(const PiecewiseExponential& p, double x)
{
    const auto& s = p.segments;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0 && near_node(x, s[i].x_begin))
            kink(x, s[i].x_begin);
        if (x >= s[i].x_begin && x < s[i].x_end)
            return static_cast<long>(i);
    }
    if (x < s.front().x_begin)
        return -1;
    return static_cast<long>(s.size());
}

double exp_segment_value(const ExpSegment& s, double x)
{
    return s.A * std::exp(x / s.L);
}

} // namespace

// Polynomial ------------------------------------------------------------------

Polynomial Polynomial::derivative() const
{
    Polynomial d;
    for (std::size_t i = 1; i < c.size(); ++i)
        d.c.push_back(c[i] * static_cast<double>(i));
    return d;
}

Polynomial Polynomial::antiderivative() const
{
    Polynomial a;
    a.c.assign(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
        a.c[i + 1] = c[i] / static_cast<double>(i + 1);
    return a;
}

bool Polynomial::is_zero() const noexcept
{
    return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

// PressureSpec ----------------------------------------------------------------

PressureSpec PressureSpec::none(double p0)
{
    PressureSpec s;
    s.p0 = p0;
    return s;
}

PressureSpec PressureSpec::constant(double k, double p0)
{
    PressureSpec s;
    s.kind = Kind::Constant;
    s.k = k;
    s.p0 = p0;
    return s;
}

PressureSpec PressureSpec::linear_in_x(double k, double p0)
{
    PressureSpec s;
    s.kind = Kind::LinearInX;
    s.k = k;
    s.p0 = p0;
    return s;
}

PressureSpec PressureSpec::time_only(std::vector<double> k_coeffs, double p0)
{
    PressureSpec s;
    s.kind = Kind::TimeOnly;
    s.k_coeffs = std::move(k_coeffs);
    s.p0 = p0;
    return s;
}

PressureSpec PressureSpec::poly_x(std::vector<double> g_coeffs, double p0)
{
    PressureSpec s;
    s.kind = Kind::PolyX;
    s.g_coeffs = std::move(g_coeffs);
    s.p0 = p0;
    return s;
}

Polynomial PressureSpec::g_polynomial() const
{
    switch (kind) {
    case Kind::None: return {};
    case Kind::Constant: return {{k}};
    case Kind::LinearInX: return {{0.0, k * k}};
    case Kind::PolyX: return {g_coeffs};
    case Kind::TimeOnly: break;
    }
    fail(ErrorCode::UnsupportedVariant, "TimeOnly pressure has no polynomial in x");
}

double PressureSpec::g(double x, double t) const
{
    if (kind == Kind::TimeOnly)
        return Polynomial{k_coeffs}(t);
    return g_polynomial()(x);
}

std::string kind_name(PressureSpec::Kind kind)
{
    switch (kind) {
    case PressureSpec::Kind::None: return "None";
    case PressureSpec::Kind::Constant: return "Constant";
    case PressureSpec::Kind::LinearInX: return "LinearInX";
    case PressureSpec::Kind::TimeOnly: return "TimeOnly";
    case PressureSpec::Kind::PolyX: return "PolyX";
    }
    return "Unknown";
}

double pressure_at(const PressureSpec& spec, double x)
{
    if (spec.kind == PressureSpec::Kind::TimeOnly)
        fail(ErrorCode::UnsupportedVariant, "pressure_at is undefined for a TimeOnly body force");
    return spec.p0 + spec.g_polynomial().antiderivative()(x);
}

// Profile ---------------------------------------------------------------------

void Profile::validate() const
{
    std::visit(
        [](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, Exponential>) {
                if (p.L == 0.0 || !std::isfinite(p.L) || !std::isfinite(p.A))
                    fail(ErrorCode::DomainError, "Exponential profile needs finite A and nonzero L");
            } else if constexpr (std::is_same_v<P, PiecewiseLinear>) {
                if (p.nodes.size() < 2)
                    fail(ErrorCode::DomainError, "PiecewiseLinear needs at least two nodes");
                for (std::size_t i = 1; i < p.nodes.size(); ++i)
                    if (!(p.nodes[i].first > p.nodes[i - 1].first))
                        fail(ErrorCode::DomainError, "PiecewiseLinear nodes must be strictly increasing");
            } else if constexpr (std::is_same_v<P, PiecewiseExponential>) {
                if (p.segments.empty())
                    fail(ErrorCode::DomainError, "PiecewiseExponential needs at least one segment");
                for (std::size_t i = 0; i < p.segments.size(); ++i) {
                    const auto& s = p.segments[i];
                    if (s.L == 0.0 || !(s.x_end > s.x_begin))
                        fail(ErrorCode::DomainError, "PiecewiseExponential segment is empty or has L = 0");
                    if (i > 0) {
                        const auto& prev = p.segments[i - 1];
                        if (prev.x_end != s.x_begin)
                            fail(ErrorCode::DomainError, "PiecewiseExponential segments must be contiguous");
                        const double ul = exp_segment_value(prev, s.x_begin);
                        const double ur = exp_segment_value(s, s.x_begin);
                        if (std::abs(ul - ur) > 1e-9 * std::max(1.0, std::abs(ul)))
                            fail(ErrorCode::DomainError, "PiecewiseExponential profile must be continuous");
                    }
                }
            } else if constexpr (std::is_same_v<P, RawJet>) {
                if (p.jet.is_constant() && p.jet.size() == 0)
                    return;
            }
        },
        v);
}

std::string Profile::kind() const
{
    static const char* names[] = {"LinearSegment", "Exponential", "PiecewiseLinear", "PiecewiseExponential", "RawJet"};
    return names[v.index()];
}

double Profile::value(double x) const
{
    return std::visit(
        [x](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, LinearSegment>) {
                return p.alpha + p.beta * x;
            } else if constexpr (std::is_same_v<P, Exponential>) {
                return p.A * std::exp(x / p.L);
            } else if constexpr (std::is_same_v<P, PiecewiseLinear>) {
                const auto& n = p.nodes;
                if (x <= n.front().first)
                    return n.front().second;
                if (x >= n.back().first)
                    return n.back().second;
                auto it = std::upper_bound(n.begin(), n.end(), x,
                                           [](double xv, const auto& node) { return xv < node.first; });
                const auto& r = *it;
                const auto& l = *(it - 1);
                return l.second + (r.second - l.second) * (x - l.first) / (r.first - l.first);
            } else if constexpr (std::is_same_v<P, PiecewiseExponential>) {
                const auto& s = p.segments;
                if (x < s.front().x_begin)
                    return exp_segment_value(s.front(), s.front().x_begin);
                for (const auto& seg : s)
                    if (x >= seg.x_begin && x < seg.x_end)
                        return exp_segment_value(seg, x);
                return exp_segment_value(s.back(), s.back().x_end);
            } else {
                return p.jet.eval(x);
            }
        },
        v);
}

double Profile::slope(double x) const
{
    return std::visit(
        [x, this](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, LinearSegment>) {
                return p.beta;
            } else if constexpr (std::is_same_v<P, Exponential>) {
                return p.A * std::exp(x / p.L) / p.L;
            } else if constexpr (std::is_same_v<P, PiecewiseLinear>) {
                const auto& n = p.nodes;
                if (x < n.front().first || x >= n.back().first)
                    return 0.0;
                auto it = std::upper_bound(n.begin(), n.end(), x,
                                           [](double xv, const auto& node) { return xv < node.first; });
                return (it->second - (it - 1)->second) / (it->first - (it - 1)->first);
            } else if constexpr (std::is_same_v<P, PiecewiseExponential>) {
                for (const auto& seg : p.segments)
                    if (x >= seg.x_begin && x < seg.x_end)
                        return exp_segment_value(seg, x) / seg.L;
                (void)this;
                return 0.0;
            } else {
                return p.jet.derivative().eval(x);
            }
        },
        v);
}

std::vector<double> Profile::nodes() const
{
    std::vector<double> out;
    if (const auto* p = std::get_if<PiecewiseLinear>(&v)) {
        for (const auto& n : p->nodes)
            out.push_back(n.first);
    } else if (const auto* e = std::get_if<PiecewiseExponential>(&v)) {
        for (std::size_t i = 0; i < e->segments.size(); ++i) {
            if (i == 0 && std::isfinite(e->segments[i].x_begin))
                out.push_back(e->segments[i].x_begin);
            if (std::isfinite(e->segments[i].x_end))
                out.push_back(e->segments[i].x_end);
        }
    }
    return out;
}

Interval Profile::support_hint() const
{
    return std::visit(
        [](const auto& p) -> Interval {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, LinearSegment>) {
                return {-1.0, 1.0};
            } else if constexpr (std::is_same_v<P, Exponential>) {
                const double L = std::abs(p.L);
                return p.L > 0 ? Interval{-7.0 * L, 1.0 * L} : Interval{-1.0 * L, 7.0 * L};
            } else if constexpr (std::is_same_v<P, PiecewiseLinear>) {
                return {p.nodes.front().first, p.nodes.back().first};
            } else if constexpr (std::is_same_v<P, PiecewiseExponential>) {
                const auto& f = p.segments.front();
                const auto& b = p.segments.back();
                const double lo = std::isfinite(f.x_begin) ? f.x_begin : std::min(f.x_end, 0.0) - 7.0 * std::abs(f.L);
                const double hi = std::isfinite(b.x_end) ? b.x_end : std::max(b.x_begin, 0.0) + 7.0 * std::abs(b.L);
                return {lo, hi};
            } else {
                return {p.jet.x0() - 1.0, p.jet.x0() + 1.0};
            }
        },
        v);
}

Interval Profile::value_range() const
{
    const Interval s = support_hint();
    Interval r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    constexpr int n = 256;
    for (int i = 0; i <= n; ++i) {
        const double u = value(s.lo + s.width() * i / n);
        r.lo = std::min(r.lo, u);
        r.hi = std::max(r.hi, u);
    }
    return r;
}

template <class T>
std::vector<T> profile_coeffs(const Profile& profile, const T& X, int order)
{
    if (order < 0)
        fail(ErrorCode::OrderError, "negative order");
    const double xv = scalar_value(X);
    return std::visit(
        [&](const auto& p) -> std::vector<T> {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, LinearSegment>) {
                std::vector<T> out(static_cast<std::size_t>(order) + 1, T(0.0));
                out[0] = T(p.alpha) + T(p.beta) * X;
                if (order >= 1)
                    out[1] = T(p.beta);
                return out;
            } else if constexpr (std::is_same_v<P, Exponential>) {
                return exp_coeffs(p.A, p.L, X, order);
            } else if constexpr (std::is_same_v<P, PiecewiseLinear>) {
                const auto& n = p.nodes;
                for (const auto& node : n)
                    if (near_node(xv, node.first))
                        kink(xv, node.first);
                if (xv < n.front().first)
                    return constant_coeffs<T>(n.front().second, order);
                if (xv > n.back().first)
                    return constant_coeffs<T>(n.back().second, order);
                auto it = std::upper_bound(n.begin(), n.end(), xv,
                                           [](double x, const auto& node) { return x < node.first; });
                const auto& r = *it;
                const auto& l = *(it - 1);
                const double s = (r.second - l.second) / (r.first - l.first);
                std::vector<T> out(static_cast<std::size_t>(order) + 1, T(0.0));
                out[0] = T(l.second) + T(s) * (X - T(l.first));
                if (order >= 1)
                    out[1] = T(s);
                return out;
            } else if constexpr (std::is_same_v<P, PiecewiseExponential>) {
                const long idx = exp_segment_index(p, xv);
                if (idx < 0)
                    return constant_coeffs<T>(exp_segment_value(p.segments.front(), p.segments.front().x_begin), order);
                if (idx >= static_cast<long>(p.segments.size()))
                    return constant_coeffs<T>(exp_segment_value(p.segments.back(), p.segments.back().x_end), order);
                const auto& seg = p.segments[static_cast<std::size_t>(idx)];
                return exp_coeffs(seg.A, seg.L, X, order);
            } else {
                const Jet& j = p.jet;
                if (!j.is_constant() && order > j.order())
                    fail(ErrorCode::OrderError, "requested order exceeds the raw jet's order");
                // coefficient i at X: sum_k c_k binom(k, i) (X - x0)^{k - i}
                const T h = X - T(j.x0());
                std::vector<T> out(static_cast<std::size_t>(order) + 1, T(0.0));
                const std::size_t n = j.size();
                for (int i = 0; i <= order; ++i) {
                    T acc = T(0.0);
                    for (std::size_t k = n; k-- > static_cast<std::size_t>(i);) {
                        double binom = 1.0;
                        for (std::size_t m = 1; m <= static_cast<std::size_t>(i); ++m)
                            binom = binom * static_cast<double>(k - static_cast<std::size_t>(i) + m) / static_cast<double>(m);
                        acc = acc * h + T(j[k] * binom);
                    }
                    out[static_cast<std::size_t>(i)] = acc;
                }
                return out;
            }
        },
        profile.v);
}

template std::vector<double> profile_coeffs<double>(const Profile&, const double&, int);
template std::vector<Jet> profile_coeffs<Jet>(const Profile&, const Jet&, int);

Jet profile_jet(const Profile& profile, double x0, int order)
{
    return Jet(x0, profile_coeffs<double>(profile, x0, order), order);
}

// FunctionHandle --------------------------------------------------------------

FunctionHandle FunctionHandle::zero()
{
    return FunctionHandle();
}

FunctionHandle FunctionHandle::polynomial(std::vector<double> coeffs)
{
    FunctionHandle h;
    h.kind_ = Kind::Polynomial;
    h.coeffs_ = std::move(coeffs);
    return h;
}

FunctionHandle FunctionHandle::log_form(double L, double A)
{
    if (A == 0.0 || L == 0.0)
        fail(ErrorCode::DomainError, "LogForm needs nonzero L and A");
    FunctionHandle h;
    h.kind_ = Kind::LogForm;
    h.L_ = L;
    h.A_ = A;
    return h;
}

FunctionHandle FunctionHandle::tabulated(std::vector<double> xs, std::vector<double> ys)
{
    if (xs.size() < 2 || xs.size() != ys.size())
        fail(ErrorCode::DomainError, "Tabulated handle needs two or more matching samples");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            fail(ErrorCode::DomainError, "Tabulated abscissae must be strictly increasing");
    FunctionHandle h;
    h.kind_ = Kind::Tabulated;
    h.xs_ = std::move(xs);
    h.ys_ = std::move(ys);
    return h;
}

FunctionHandle FunctionHandle::custom(std::function<double(double)> f, std::function<double(double)> d1,
                                      std::function<double(double)> d2, Interval domain)
{
    FunctionHandle h;
    h.kind_ = Kind::Custom;
    h.f_ = std::move(f);
    h.d1_ = std::move(d1);
    h.d2_ = std::move(d2);
    h.domain_ = domain;
    return h;
}

Interval FunctionHandle::domain() const
{
    switch (kind_) {
    case Kind::LogForm:
        return A_ > 0 ? Interval{0.0, std::numeric_limits<double>::infinity()}
                      : Interval{-std::numeric_limits<double>::infinity(), 0.0};
    case Kind::Tabulated: return {xs_.front(), xs_.back()};
    case Kind::Custom: return domain_;
    default: return {};
    }
}

double FunctionHandle::value(double u) const
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Polynomial: return Polynomial{coeffs_}(u);
    case Kind::LogForm: return (u / A_ > 0.0) ? L_ * std::log(u / A_) : nan;
    case Kind::Tabulated: {
        if (u < xs_.front() || u > xs_.back())
            return nan;
        auto it = std::upper_bound(xs_.begin(), xs_.end(), u);
        if (it == xs_.end())
            return ys_.back();
        const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        return ys_[i - 1] + (ys_[i] - ys_[i - 1]) * (u - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    }
    case Kind::Custom: return f_(u);
    }
    return nan;
}

double FunctionHandle::d1(double u) const
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Polynomial: return Polynomial{coeffs_}.derivative()(u);
    case Kind::LogForm: return (u / A_ > 0.0) ? L_ / u : nan;
    case Kind::Tabulated: {
        if (u < xs_.front() || u > xs_.back())
            return nan;
        auto it = std::upper_bound(xs_.begin(), xs_.end(), u);
        std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        if (i >= xs_.size())
            i = xs_.size() - 1;
        return (ys_[i] - ys_[i - 1]) / (xs_[i] - xs_[i - 1]);
    }
    case Kind::Custom: return d1_(u);
    }
    return nan;
}

double FunctionHandle::d2(double u) const
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Polynomial: return Polynomial{coeffs_}.derivative().derivative()(u);
    case Kind::LogForm: return (u / A_ > 0.0) ? -L_ / (u * u) : nan;
    case Kind::Tabulated: return (u < xs_.front() || u > xs_.back()) ? nan : 0.0;
    case Kind::Custom: {
        if (d2_)
            return d2_(u);
        const double h = 1e-5 * std::max(1.0, std::abs(u));
        return (d1_(u + h) - d1_(u - h)) / (2.0 * h);
    }
    }
    return nan;
}

} // namespace mongelab
