#include "mongelab/extradim.hpp"

#include "mongelab/error.hpp"
#include "mongelab/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mongelab {

namespace {

constexpr const char* kModule = "extradim";

[[noreturn]] void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, kModule, what);
}

template <class T>
using BJ = BasicBiJet<T>;

[[maybe_unused]] bool is_zero(double v) { return v == 0.0; }
bool is_zero(const Jet& v)
{
    return std::all_of(v.coeffs().begin(), v.coeffs().end(), [](double c) { return c == 0.0; });
}

template <class T>
std::vector<T> zeros(int n)
{
    return std::vector<T>(static_cast<std::size_t>(n) + 1, T(0.0));
}

template <class T>
std::vector<T> trunc_mul(const std::vector<T>& a, const std::vector<T>& b)
{
    const std::size_t n = a.size();
    std::vector<T> out(n, T(0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

// layer j holds u^{j+1} / (j+1)!
template <class T>
BJ<T> lift_coeffs(double x0, const std::vector<T>& u, int nx, int na)
{
    BJ<T> out(x0, nx, na);
    std::vector<T> layer(u.begin(), u.begin() + nx + 1);
    std::vector<T> base = layer;
    for (int j = 0; j <= na; ++j) {
        for (int i = 0; i <= nx; ++i)
            out(i, j) = layer[static_cast<std::size_t>(i)];
        if (j == na)
            break;
        layer = trunc_mul(layer, base);
        for (auto& v : layer)
            v = v / static_cast<double>(j + 2);
    }
    return out;
}

template <class T>
BJ<T> free_coeffs(const BJ<T>& f, const T& tau)
{
    const int nx = f.nx();
    const int na = f.na();
    BJ<T> out(f.x0(), nx, na);
    for (int i = 0; i <= nx; ++i) {
        for (int j = 0; j <= na; ++j) {
            T acc = f(i, j);
            T w = T(1.0);
            const int mmax = std::min(nx - i, na - j);
            for (int m = 1; m <= mmax; ++m) {
                w = w * tau * (static_cast<double>(i + m) * static_cast<double>(j + m) / m);
                acc += w * f(i + m, j + m);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

// c_ij -> c_ij / c^{i+j+1}
template <class T>
BJ<T> scale_coeffs(const BJ<T>& f, const T& c)
{
    const T inv = T(1.0) / c;
    std::vector<T> pw(static_cast<std::size_t>(f.nx() + f.na() + 2), T(1.0));
    for (std::size_t p = 1; p < pw.size(); ++p)
        pw[p] = pw[p - 1] * inv;
    BJ<T> out(f.x0(), f.nx(), f.na());
    for (int i = 0; i <= f.nx(); ++i)
        for (int j = 0; j <= f.na(); ++j)
            out(i, j) = f(i, j) * pw[static_cast<std::size_t>(i + j + 1)];
    return out;
}

template <class T>
std::vector<T> particular_coeffs(Particular p, double k, double x0, const T& t, int nx)
{
    using std::tan;
    auto out = zeros<T>(nx);
    switch (p) {
    case Particular::Zero: break;
    case Particular::ConstGradShift: out[0] = k * t; break;
    case Particular::LinGradTan: {
        const T s = k * tan(k * t);
        out[0] = x0 * s;
        if (nx >= 1)
            out[1] = s;
        break;
    }
    }
    return out;
}

template <class T>
std::vector<T> g_coeffs(const PressureSpec& pressure, double x0, const T& t, int nx)
{
    using K = PressureSpec::Kind;
    auto out = zeros<T>(nx);
    switch (pressure.kind) {
    case K::None: break;
    case K::Constant: out[0] = T(pressure.k); break;
    case K::LinearInX:
        out[0] = T(pressure.k * pressure.k * x0);
        if (nx >= 1)
            out[1] = T(pressure.k * pressure.k);
        break;
    case K::PolyX: {
        const auto& c = pressure.g_coeffs;
        const Jet shifted = Jet(0.0, c, static_cast<int>(c.size())).shift(x0);
        for (int i = 0; i <= nx; ++i)
            out[static_cast<std::size_t>(i)] = T(shifted[static_cast<std::size_t>(i)]);
        break;
    }
    case K::TimeOnly: {
        T acc = T(0.0);
        for (std::size_t i = pressure.k_coeffs.size(); i-- > 0;)
            acc = acc * t + T(pressure.k_coeffs[i]);
        out[0] = acc;
        break;
    }
    }
    return out;
}

// The field in its particular representation at orders (nx, na).
template <class T>
BJ<T> realize_particular(const DoubledField& f, const T& t, int nx, int na)
{
    using std::cos;
    using std::sin;
    const double x0 = f.x0();
    if (f.origin == DoubledField::Origin::Series) {
        const int so = f.series_order;
        const TimeSeries ts = build_series(f.source, f.pressure, x0, so, std::max(2 * so, nx + so));
        auto u = zeros<T>(nx);
        for (int i = 0; i <= nx; ++i) {
            T acc = T(0.0);
            for (int n = so; n >= 0; --n)
                acc = acc * t + T(ts.coeffs[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)]);
            u[static_cast<std::size_t>(i)] = acc;
        }
        return lift_coeffs(x0, u, nx, na);
    }
    // The kernel reaches x orders up to nx + na before truncation.
    const int wide = nx + na;
    const double k = f.k;
    switch (f.particular) {
    case Particular::Zero: {
        const auto u = profile_coeffs<T>(f.source, T(x0), wide);
        return free_coeffs(lift_coeffs(x0, u, wide, na), t).truncated(nx, na);
    }
    case Particular::ConstGradShift: {
        const T X = T(x0) + 0.5 * k * t * t;
        const auto u = profile_coeffs<T>(f.source, X, wide);
        return free_coeffs(lift_coeffs(x0, u, wide, na), t).truncated(nx, na);
    }
    case Particular::LinGradTan: {
        if (k == 0.0) {
            const auto u = profile_coeffs<T>(f.source, T(x0), wide);
            return free_coeffs(lift_coeffs(x0, u, wide, na), t).truncated(nx, na);
        }
        const T c = cos(k * t);
        const T X = T(x0) / c;
        const auto u = profile_coeffs<T>(f.source, X, wide);
        const T tau = sin(2.0 * k * t) / (2.0 * k);
        return free_coeffs(scale_coeffs(lift_coeffs(x0, u, wide, na), c), tau).truncated(nx, na);
    }
    }
    fail(ErrorCode::DomainError, "unknown particular part");
}

// (exp(a up) (1 + a P) - 1) / a from P at (nx, na + 1).
template <class T>
BJ<T> to_full(const BJ<T>& P, const std::vector<T>& up, int nx, int na)
{
    bool zero_up = true;
    for (const auto& v : up)
        if (!is_zero(v))
            zero_up = false;
    if (zero_up)
        return P.truncated(nx, na);
    // layers of exp(a up): up^l / l!
    std::vector<std::vector<T>> E;
    auto e = zeros<T>(nx);
    e[0] = T(1.0);
    E.push_back(e);
    for (int l = 1; l <= na + 1; ++l) {
        e = trunc_mul(E.back(), up);
        for (auto& v : e)
            v = v / static_cast<double>(l);
        E.push_back(e);
    }
    BJ<T> out(P.x0(), nx, na);
    for (int j = 0; j <= na; ++j) {
        // coefficient of a^{j+1} in exp(a up)(1 + a P)
        for (int i = 0; i <= nx; ++i) {
            T acc = E[static_cast<std::size_t>(j + 1)][static_cast<std::size_t>(i)];
            for (int l = 0; l <= j; ++l)
                for (int p = 0; p <= i; ++p)
                    acc += E[static_cast<std::size_t>(l)][static_cast<std::size_t>(p)] * P(i - p, j - l);
            out(i, j) = acc;
        }
    }
    return out;
}

struct WordCost {
    int dx = 0;
    int da = 0;
    int dt = 0;
};

WordCost cost_of(const OperatorWord& word)
{
    WordCost c;
    for (Generator g : word) {
        switch (g) {
        case Generator::Dt: ++c.dt; break;
        case Generator::Da: ++c.da; break;
        case Generator::Dx:
        case Generator::Boost: ++c.dx; break;
        }
    }
    return c;
}

BJ<Jet> apply_generator(const BJ<Jet>& F, Generator g)
{
    const int nx = F.nx();
    const int na = F.na();
    switch (g) {
    case Generator::Dt: {
        BJ<Jet> out(F.x0(), nx, na);
        for (int i = 0; i <= nx; ++i)
            for (int j = 0; j <= na; ++j)
                out(i, j) = F(i, j).derivative();
        return out;
    }
    case Generator::Dx: {
        BJ<Jet> out(F.x0(), nx - 1, na);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j <= na; ++j)
                out(i, j) = static_cast<double>(i + 1) * F(i + 1, j);
        return out;
    }
    case Generator::Da: {
        BJ<Jet> out(F.x0(), nx, na - 1);
        for (int i = 0; i <= nx; ++i)
            for (int j = 0; j < na; ++j)
                out(i, j) = static_cast<double>(j + 1) * F(i, j + 1);
        return out;
    }
    case Generator::Boost: {
        BJ<Jet> out(F.x0(), nx - 1, na);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j <= na; ++j)
                out(i, j) = (F.x0() * static_cast<double>(i + 1)) * F(i + 1, j) + static_cast<double>(i - j) * F(i, j);
        return out;
    }
    }
    return F;
}

// The field with t carried as a jet of order q about t.
BJ<Jet> realize(const DoubledField& f, const Jet& t)
{
    const int nx = f.nx();
    const int na = f.na();
    if (!f.full)
        return realize_particular<Jet>(f, t, nx, na);
    const WordCost c = cost_of(f.word);
    const int bx = nx + c.dx;
    const int ba = na + c.da;
    const BJ<Jet> P = realize_particular<Jet>(f, t, bx, ba + 1);
    BJ<Jet> F = to_full(P, particular_coeffs<Jet>(f.particular, f.k, f.x0(), t, bx), bx, ba);
    for (auto it = f.word.rbegin(); it != f.word.rend(); ++it)
        F = apply_generator(F, *it);
    return F;
}

BiJet values_of(const BJ<Jet>& B)
{
    BiJet out(B.x0(), B.nx(), B.na());
    for (int i = 0; i <= B.nx(); ++i)
        for (int j = 0; j <= B.na(); ++j)
            out(i, j) = B(i, j).value();
    return out;
}

BiJet rates_of(const BJ<Jet>& B)
{
    BiJet out(B.x0(), B.nx(), B.na());
    for (int i = 0; i <= B.nx(); ++i)
        for (int j = 0; j <= B.na(); ++j)
            out(i, j) = B(i, j)[1];
    return out;
}

double operator_entry(const BiJet& F, const std::vector<double>& up, const std::vector<double>& g, double s, int i,
                      int j)
{
    double acc = static_cast<double>(i + 1) * static_cast<double>(j + 1) * F.get(i + 1, j + 1);
    const int n = static_cast<int>(up.size());
    for (int p = 0; p < n && p <= i + 1; ++p)
        acc += up[static_cast<std::size_t>(p)] * static_cast<double>(i - p + 1) * F.get(i - p + 1, j);
    for (int p = 0; p + 1 < n && p <= i; ++p)
        acc += static_cast<double>(p + 1) * up[static_cast<std::size_t>(p + 1)] * static_cast<double>(1 + j) * F.get(i - p, j);
    const int ng = static_cast<int>(g.size());
    for (int p = 0; p < ng && p <= i; ++p)
        acc += g[static_cast<std::size_t>(p)] * F.get(i - p, j - 1);
    if (j == 0 && i < ng)
        acc += g[static_cast<std::size_t>(i)] * s;
    return acc;
}

double residual_max(const BiJet& F, const BiJet& Ft, const std::vector<double>& up, const std::vector<double>& g,
                    double s)
{
    double worst = 0.0;
    for (int i = 0; i <= F.nx() / 2; ++i)
        for (int j = 0; j <= F.na() / 2; ++j)
            worst = std::max(worst, std::abs(Ft(i, j) - operator_entry(F, up, g, s, i, j)));
    return worst;
}

DoubledField evolved(const DoubledField& f, double t, Particular p, double k, const PressureSpec& pressure)
{
    if (f.t != 0.0)
        fail(ErrorCode::DomainError, "kernel evolution starts from a t = 0 field");
    if (f.full)
        fail(ErrorCode::DomainError, "operator-generated fields are not re-evolved");
    DoubledField out = f;
    out.t = t;
    out.particular = p;
    out.k = k;
    out.pressure = pressure;
    out.origin = DoubledField::Origin::Kernel;
    out.bijet = realize_particular<double>(out, t, f.nx(), f.na());
    return out;
}

} // namespace

DoubledField lift(const Profile& profile, const PressureSpec& pressure, double x0, int nx, int na)
{
    if (nx < 0 || na < 0)
        fail(ErrorCode::OrderError, "orders must be non-negative");
    using K = PressureSpec::Kind;
    DoubledField f;
    f.source = profile;
    f.pressure = pressure;
    switch (pressure.kind) {
    case K::None: break;
    case K::Constant: f.particular = Particular::ConstGradShift; f.k = pressure.k; break;
    case K::LinearInX: f.particular = Particular::LinGradTan; f.k = pressure.k; break;
    case K::PolyX:
    case K::TimeOnly: f.origin = DoubledField::Origin::Series; break;
    }
    f.bijet = lift_coeffs(x0, profile_coeffs<double>(profile, x0, nx), nx, na);
    return f;
}

BiJet lift_jet(const Jet& u, int nx, int na)
{
    if (!u.is_constant() && u.order() < nx)
        fail(ErrorCode::OrderError, "jet order below the requested x order");
    std::vector<double> c(static_cast<std::size_t>(nx) + 1);
    for (int i = 0; i <= nx; ++i)
        c[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)];
    return lift_coeffs(u.is_constant() ? 0.0 : u.x0(), c, nx, na);
}

BiJet free_kernel(const BiJet& f, double t)
{
    return free_coeffs(f, t);
}

DoubledField evolve_free(const DoubledField& f, double t)
{
    return evolved(f, t, Particular::Zero, 0.0, PressureSpec::none());
}

DoubledField evolve_const_grad(const DoubledField& f, double k, double t)
{
    return evolved(f, t, Particular::ConstGradShift, k, PressureSpec::constant(k));
}

DoubledField evolve_lin_grad(const DoubledField& f, double k, double t)
{
    if (!(std::cos(k * t) > 1e-12)) {
        std::ostringstream os;
        os << "cos(k t) vanishes or changes sign at k t = " << k * t;
        fail(ErrorCode::PoleError, os.str());
    }
    return evolved(f, t, Particular::LinGradTan, k, PressureSpec::linear_in_x(k));
}

DoubledField evolve(const DoubledField& f, double t)
{
    using K = PressureSpec::Kind;
    switch (f.pressure.kind) {
    case K::None: return evolve_free(f, t);
    case K::Constant: return evolve_const_grad(f, f.pressure.k, t);
    case K::LinearInX: return evolve_lin_grad(f, f.pressure.k, t);
    case K::PolyX:
    case K::TimeOnly: break;
    }
    if (f.full)
        fail(ErrorCode::DomainError, "operator-generated fields are not re-evolved");
    DoubledField out = f;
    out.t = t;
    out.origin = DoubledField::Origin::Series;
    out.bijet = realize_particular<double>(out, t, f.nx(), f.na());
    return out;
}

Jet extract_u(const DoubledField& f)
{
    const int nx = f.nx();
    std::vector<double> c(static_cast<std::size_t>(nx) + 1);
    const auto up = f.full ? zeros<double>(nx) : particular_coeffs<double>(f.particular, f.k, f.x0(), f.t, nx);
    for (int i = 0; i <= nx; ++i)
        c[static_cast<std::size_t>(i)] = f.bijet(i, 0) + up[static_cast<std::size_t>(i)];
    return Jet(f.x0(), std::move(c), nx);
}

double diffusion_residual(const DoubledField& f, double dt)
{
    if (dt < 0.0)
        fail(ErrorCode::DomainError, "dt must be non-negative");
    const int q = cost_of(f.word).dt + 1;
    const BJ<Jet> now = realize(f, Jet::variable(f.t, q));
    const BiJet F = values_of(now);
    BiJet Ft;
    if (dt == 0.0) {
        Ft = rates_of(now);
    } else {
        const BiJet Fp = values_of(realize(f, Jet::variable(f.t + dt, q)));
        const BiJet Fm = values_of(realize(f, Jet::variable(f.t - dt, q)));
        Ft = Fp;
        for (int i = 0; i <= F.nx(); ++i)
            for (int j = 0; j <= F.na(); ++j)
                Ft(i, j) = (Fp(i, j) - Fm(i, j)) / (2.0 * dt);
    }
    const int nx = F.nx();
    std::vector<double> up = zeros<double>(nx);
    std::vector<double> g = zeros<double>(nx);
    double s = 1.0;
    if (f.full) {
        g = g_coeffs<double>(f.pressure, f.x0(), f.t, nx);
        s = f.singular;
    } else {
        up = particular_coeffs<double>(f.particular, f.k, f.x0(), f.t, nx);
        if (f.particular == Particular::Zero)
            g = g_coeffs<double>(f.pressure, f.x0(), f.t, nx);
    }
    return residual_max(F, Ft, up, g, s);
}

double diffusion_residual(const std::function<BiJet(double)>& family, const LinearOperator& op, double t, double dt)
{
    if (!(dt > 0.0))
        fail(ErrorCode::DomainError, "dt must be positive");
    const BiJet F = family(t);
    const BiJet Fp = family(t + dt);
    const BiJet Fm = family(t - dt);
    BiJet Ft = F;
    for (int i = 0; i <= F.nx(); ++i)
        for (int j = 0; j <= F.na(); ++j)
            Ft(i, j) = (Fp.get(i, j) - Fm.get(i, j)) / (2.0 * dt);
    auto dense = [&](const std::function<Jet(double)>& fn) {
        std::vector<double> v = zeros<double>(F.nx());
        if (fn) {
            const Jet j = fn(t);
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] = j[i];
        }
        return v;
    };
    return residual_max(F, Ft, dense(op.up), dense(op.g), op.singular);
}

std::vector<Jet> time_taylor(const Profile& profile, const PressureSpec& pressure, double x0, int order, int x_order)
{
    if (order < 0 || x_order < 0)
        fail(ErrorCode::OrderError, "orders must be non-negative");
    DoubledField f = lift(profile, pressure, x0, x_order + order, order);
    if (f.origin != DoubledField::Origin::Kernel)
        fail(ErrorCode::UnsupportedVariant, "no kernel for this driver");
    const Jet t = Jet::variable(0.0, order);
    const BJ<Jet> B = realize_particular<Jet>(f, t, x_order + order, order);
    const auto up = particular_coeffs<Jet>(f.particular, f.k, x0, t, x_order);
    std::vector<Jet> out;
    for (int n = 0; n <= order; ++n) {
        std::vector<double> c(static_cast<std::size_t>(x_order) + 1);
        for (int i = 0; i <= x_order; ++i)
            c[static_cast<std::size_t>(i)] = B(i, 0)[static_cast<std::size_t>(n)] + up[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)];
        out.emplace_back(x0, std::move(c), x_order);
    }
    return out;
}

bool commutes(Generator gen, const PressureSpec& pressure)
{
    using K = PressureSpec::Kind;
    switch (pressure.kind) {
    case K::None: return true;
    case K::LinearInX: return gen == Generator::Dt || gen == Generator::Boost;
    case K::Constant: return gen == Generator::Dt || gen == Generator::Dx;
    case K::PolyX: return gen == Generator::Dt;
    case K::TimeOnly: return gen == Generator::Dx || (gen == Generator::Dt && pressure.k_coeffs.size() <= 1);
    }
    return false;
}

DoubledField solution_family(const DoubledField& f, const OperatorWord& word)
{
    static const char* names[] = {"Dt", "Da", "Dx", "Boost"};
    for (Generator g : word)
        if (!commutes(g, f.pressure)) {
            std::ostringstream os;
            os << names[static_cast<int>(g)] << " does not commute with the " << kind_name(f.pressure.kind)
               << " operator";
            fail(ErrorCode::NotCommuting, os.str());
        }
    DoubledField out = f;
    OperatorWord combined = word;
    double s = f.full ? f.singular : 1.0;
    if (f.full)
        combined.insert(combined.end(), f.word.begin(), f.word.end());
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        if (*it != Generator::Boost)
            s = 0.0;
    out.full = true;
    out.word = combined;
    out.singular = s;
    out.bijet = values_of(realize(out, Jet::variable(f.t, cost_of(combined).dt)));
    return out;
}

BiJet apply_A(const BiJet& f)
{
    BiJet out(f.x0(), f.nx(), f.na());
    for (int i = 0; i <= f.nx(); ++i)
        for (int j = 0; j <= f.na(); ++j)
            out(i, j) = static_cast<double>(i + 1) * static_cast<double>(j + 1) * f.get(i + 1, j + 1);
    return out;
}

BiJet apply_B(const BiJet& f)
{
    BiJet out(f.x0(), f.nx(), f.na());
    for (int i = 0; i <= f.nx(); ++i)
        for (int j = 0; j <= f.na(); ++j)
            out(i, j) = static_cast<double>(j) * f(i, j);
    return out;
}

BiJet apply_C(const BiJet& f)
{
    BiJet out(f.x0(), f.nx(), f.na());
    for (int i = 0; i <= f.nx(); ++i)
        for (int j = 0; j <= f.na(); ++j)
            out(i, j) = static_cast<double>(1 + i - j) * f(i, j) + f.x0() * static_cast<double>(i + 1) * f.get(i + 1, j);
    return out;
}

AlgebraCheck algebra_check(int nx, int na, double x0)
{
    AlgebraCheck r;
    auto maxabs = [](const BiJet& b) {
        double m = 0.0;
        for (double v : b.data())
            m = std::max(m, std::abs(v));
        return m;
    };
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < na; ++j) {
            BiJet e(x0, nx, na);
            e(i, j) = 1.0;
            const BiJet A = apply_A(e);
            const BiJet B = apply_B(e);
            const BiJet C = apply_C(e);
            r.ab_minus_a = std::max(r.ab_minus_a, maxabs(apply_A(B) - apply_B(A) - A));
            r.ac = std::max(r.ac, maxabs(apply_A(C) - apply_C(A)));
            r.bc = std::max(r.bc, maxabs(apply_B(C) - apply_C(B)));
        }
    }
    return r;
}

// Covariance ---------------------------------------------------------------

double pde_residual_at(const std::function<double(double, double)>& u, const std::function<double(double, double)>& g,
                       double x, double t)
{
    const double hx = 1e-3 * std::max(1.0, std::abs(x));
    const double ht = 1e-3 * std::max(1.0, std::abs(t));
    auto d4 = [](double fm2, double fm1, double fp1, double fp2, double h) {
        return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    };
    const double ux = d4(u(x - 2 * hx, t), u(x - hx, t), u(x + hx, t), u(x + 2 * hx, t), hx);
    const double ut = d4(u(x, t - 2 * ht), u(x, t - ht), u(x, t + ht), u(x, t + 2 * ht), ht);
    return ut - u(x, t) * ux - (g ? g(x, t) : 0.0);
}

double pde_residual(const SolutionHandle& sol, const std::function<double(double, double)>& g, int n)
{
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sol.x.lo + sol.x.width() * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double t = sol.t.lo + sol.t.width() * j / (n - 1);
            const double r = std::abs(pde_residual_at(sol.u, g, x, t));
            if (!std::isfinite(r))
                return r;
            worst = std::max(worst, r);
        }
    }
    return worst;
}

namespace {

void require_solution(const SolutionHandle& sol)
{
    const double r = pde_residual(sol, {}, 10);
    if (!(r <= 1e-8)) {
        std::ostringstream os;
        os << "input fails the undriven equation, residual " << r;
        fail(ErrorCode::ResidualError, os.str());
    }
}

} // namespace

SolutionHandle covariance_const(const SolutionHandle& u_sol, double k)
{
    require_solution(u_sol);
    SolutionHandle out;
    auto f = u_sol.u;
    out.u = [f, k](double x, double t) { return f(x + 0.5 * k * t * t, t) + k * t; };
    out.t = u_sol.t;
    const double s1 = 0.5 * k * u_sol.t.lo * u_sol.t.lo;
    const double s2 = 0.5 * k * u_sol.t.hi * u_sol.t.hi;
    const Interval x{u_sol.x.lo - std::min(s1, s2), u_sol.x.hi - std::max(s1, s2)};
    out.x = x.hi > x.lo ? x : u_sol.x;
    return out;
}

SolutionHandle covariance_linear(const SolutionHandle& u_sol, double k)
{
    require_solution(u_sol);
    if (k == 0.0)
        return u_sol;
    SolutionHandle out;
    auto f = u_sol.u;
    out.u = [f, k](double x, double t) {
        const double c = std::cos(k * t);
        return f(x / c, std::tan(k * t) / k) / c + k * x * std::tan(k * t);
    };
    out.t = {std::atan(k * u_sol.t.lo) / k, std::atan(k * u_sol.t.hi) / k};
    const double cmin = std::min(std::cos(k * out.t.lo), std::cos(k * out.t.hi));
    const Interval x{u_sol.x.lo < 0 ? u_sol.x.lo * cmin : u_sol.x.lo, u_sol.x.hi > 0 ? u_sol.x.hi * cmin : u_sol.x.hi};
    out.x = x.hi > x.lo ? x : u_sol.x;
    return out;
}

// v factors ----------------------------------------------------------------

double verify_v_factor(const ClosedForm& u, const ClosedForm& v, const Grid& grid)
{
    // Ridders extrapolation of central differences.
    auto d4 = [](const std::function<double(double)>& fn, double z) {
        constexpr int n = 10;
        constexpr double shrink = 1.4, s2 = shrink * shrink;
        double h = 1e-2 * std::max(1.0, std::abs(z));
        double a[n][n];
        a[0][0] = (fn(z + h) - fn(z - h)) / (2.0 * h);
        double best = a[0][0], err = std::numeric_limits<double>::infinity();
        for (int i = 1; i < n; ++i) {
            h /= shrink;
            a[0][i] = (fn(z + h) - fn(z - h)) / (2.0 * h);
            double fac = s2;
            for (int j = 1; j <= i; ++j) {
                a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
                fac *= s2;
                const double e = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
                if (e <= err) {
                    err = e;
                    best = a[j][i];
                }
            }
            if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err)
                break;
        }
        return best;
    };
    double worst = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.nx > 1 ? grid.x.lo + grid.x.width() * i / (grid.nx - 1) : grid.x.lo;
        for (int j = 0; j < grid.nt; ++j) {
            const double t = grid.nt > 1 ? grid.t.lo + grid.t.width() * j / (grid.nt - 1) : grid.t.lo;
            const double uv = u.f(x, t);
            const double vv = v.f(x, t);
            if (!std::isfinite(uv) || !std::isfinite(vv) || std::abs(uv) > 1e12 || std::abs(vv) > 1e12) {
                std::ostringstream os;
                os << "pole at (x, t) = (" << x << ", " << t << ")";
                fail(ErrorCode::PoleOnGrid, os.str());
            }
            const double ux = u.fx ? u.fx(x, t) : d4([&](double z) { return u.f(z, t); }, x);
            const double vx = v.fx ? v.fx(x, t) : d4([&](double z) { return v.f(z, t); }, x);
            const double vt = v.ft ? v.ft(x, t) : d4([&](double z) { return v.f(x, z); }, t);
            worst = std::max(worst, std::abs(vt - (ux * vv + uv * vx)));
        }
    }
    return worst;
}

std::pair<ClosedForm, ClosedForm> tan_pair(double k)
{
    ClosedForm u{[k](double x, double t) { return k * x * std::tan(k * t); },
                 [k](double, double t) { return k * std::tan(k * t); },
                 [k](double x, double t) {
                     const double c = std::cos(k * t);
                     return k * k * x / (c * c);
                 }};
    ClosedForm v{[k](double, double t) { return -1.0 / std::cos(k * t); }, [](double, double) { return 0.0; },
                 [k](double, double t) {
                     const double c = std::cos(k * t);
                     return -k * std::sin(k * t) / (c * c);
                 }};
    return {u, v};
}

std::pair<ClosedForm, ClosedForm> cot_pair(double k)
{
    ClosedForm u{[k](double x, double t) { return -k * x * std::cos(k * t) / std::sin(k * t); },
                 [k](double, double t) { return -k * std::cos(k * t) / std::sin(k * t); },
                 [k](double x, double t) {
                     const double s = std::sin(k * t);
                     return k * k * x / (s * s);
                 }};
    ClosedForm v{[k](double, double t) { return 1.0 / std::sin(k * t); }, [](double, double) { return 0.0; },
                 [k](double, double t) {
                     const double s = std::sin(k * t);
                     return -k * std::cos(k * t) / (s * s);
                 }};
    return {u, v};
}

// JSON ----------------------------------------------------------------------

nlohmann::json bijet_to_json(const BiJet& b)
{
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i <= b.nx(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j <= b.na(); ++j)
            row.push_back(b(i, j));
        rows.push_back(std::move(row));
    }
    return {{"x0", b.x0()}, {"nx", b.nx()}, {"na", b.na()}, {"coeffs", std::move(rows)}};
}

BiJet bijet_from_json(const nlohmann::json& j)
{
    try {
        const int nx = j.at("nx").get<int>();
        const int na = j.at("na").get<int>();
        if (nx < 0 || na < 0)
            fail(ErrorCode::ConfigError, "negative bijet orders");
        BiJet b(j.at("x0").get<double>(), nx, na);
        const auto& rows = j.at("coeffs");
        if (!rows.is_array() || rows.size() != static_cast<std::size_t>(nx) + 1)
            fail(ErrorCode::ConfigError, "coeffs must have nx + 1 rows");
        for (int i = 0; i <= nx; ++i) {
            const auto& row = rows[static_cast<std::size_t>(i)];
            if (!row.is_array() || row.size() != static_cast<std::size_t>(na) + 1)
                fail(ErrorCode::ConfigError, "each coeffs row must have na + 1 entries");
            for (int k = 0; k <= na; ++k)
                b(i, k) = row[static_cast<std::size_t>(k)].get<double>();
        }
        return b;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ConfigError, e.what());
    }
}

} // namespace mongelab
