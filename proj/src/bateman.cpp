#include "mongelab/bateman.hpp"

#include "mongelab/error.hpp"
#include "mongelab/numerics.hpp"

#include <cmath>
#include <sstream>

namespace mongelab {

namespace {

constexpr const char* kModule = "bateman";

[[noreturn]] void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, kModule, what);
}

// P, Q and their partials up to second order.
struct Coeff {
    double v = 0, x = 0, t = 0, xx = 0, tt = 0, xt = 0;
};

void multipliers(const PhiSolution& sol, double x, double t, Coeff& P, Coeff& Q)
{
    const double k = sol.k;
    switch (sol.variant) {
    case PhiSolution::Variant::Classic:
        P = {x, 1, 0, 0, 0, 0};
        Q = {t, 0, 1, 0, 0, 0};
        return;
    case PhiSolution::Variant::ConstGrad:
        P = {x + 0.5 * k * t * t, 1, k * t, 0, k, 0};
        Q = {t, 0, 1, 0, 0, 0};
        return;
    case PhiSolution::Variant::LinGrad: {
        if (x == 0.0)
            fail(ErrorCode::DomainError, "the linear-gradient family is singular at x = 0");
        const double s = std::sin(k * t);
        const double c = std::cos(k * t);
        const double x2 = x * x;
        const double x3 = x2 * x;
        P = {s / x, -s / x2, k * c / x, 2 * s / x3, -k * k * s / x, -k * c / x2};
        Q = {c / x, -c / x2, -k * s / x, 2 * c / x3, -k * k * c / x, k * s / x2};
        return;
    }
    }
}

} // namespace

double PhiSolution::g(double x) const
{
    switch (variant) {
    case Variant::Classic: return 0.0;
    case Variant::ConstGrad: return k;
    case Variant::LinGrad: return k * k * x;
    }
    return 0.0;
}

double u_from_phi(double phi_t, double phi_x)
{
    if (phi_x == 0.0)
        fail(ErrorCode::ZeroGradient, "phi_x vanishes");
    return phi_t / phi_x;
}

PhiDerivatives differentiate(const ScalarField& phi, double x, double t, double h)
{
    if (!(h > 0.0))
        h = 1e-5 * std::max({1.0, std::abs(x), std::abs(t)});
    const auto& f = phi.f;
    PhiDerivatives d;
    d.phi = f(x, t);
    d.x = phi.fx ? phi.fx(x, t) : (f(x + h, t) - f(x - h, t)) / (2 * h);
    d.t = phi.ft ? phi.ft(x, t) : (f(x, t + h) - f(x, t - h)) / (2 * h);
    // Second partials: central differences at steps H and H/2, Richardson-combined.
    const double H = 100.0 * h;
    auto xx = [&](double s) { return (f(x + s, t) - 2 * d.phi + f(x - s, t)) / (s * s); };
    auto tt = [&](double s) { return (f(x, t + s) - 2 * d.phi + f(x, t - s)) / (s * s); };
    auto xt = [&](double s) {
        return (f(x + s, t + s) - f(x + s, t - s) - f(x - s, t + s) + f(x - s, t - s)) / (4 * s * s);
    };
    auto rich = [&](const auto& D) { return (4.0 * D(0.5 * H) - D(H)) / 3.0; };
    d.xx = phi.fxx ? phi.fxx(x, t) : rich(xx);
    d.tt = phi.ftt ? phi.ftt(x, t) : rich(tt);
    d.xt = phi.fxt ? phi.fxt(x, t) : rich(xt);
    return d;
}

double bateman_residual(const PhiDerivatives& d, double g_value)
{
    const double scale = std::max({1.0, std::abs(d.x), std::abs(d.t)});
    if (std::abs(d.x) < 1e-14 * scale && std::abs(d.t) < 1e-14 * scale)
        fail(ErrorCode::DegeneratePoint, "both first partials vanish");
    const double lhs = d.x * d.x * d.tt - 2.0 * d.x * d.t * d.xt + d.t * d.t * d.xx;
    const double rhs = d.x * d.x * d.x * g_value;
    const double norm = std::pow(std::abs(d.x), 3) + std::pow(std::abs(d.t), 3) + 1e-30;
    return std::abs(lhs - rhs) / norm;
}

double bateman_residual(const ScalarField& phi, double g_value, double x, double t, double h)
{
    return bateman_residual(differentiate(phi, x, t, h), g_value);
}

std::vector<double> solve_phi(const PhiSolution& sol, double x, double t, Interval phi_range, int n_scan)
{
    Coeff P, Q;
    multipliers(sol, x, t, P, Q);
    const double scale = std::max({1.0, std::abs(x), std::abs(t)});
    if (std::abs(P.v) < 1e-14 * scale && std::abs(Q.v) < 1e-14 * scale)
        fail(ErrorCode::DegenerateCoefficients, "both multipliers vanish");
    auto f = [&](double phi) { return P.v * sol.F.value(phi) + Q.v * sol.G.value(phi) - sol.c; };
    std::vector<double> roots = numerics::find_roots(f, phi_range.lo, phi_range.hi, n_scan, 1e-15);
    if (roots.empty()) {
        std::ostringstream os;
        os.precision(17);
        os << "no root in [" << phi_range.lo << ", " << phi_range.hi << "] at (x, t) = (" << x << ", " << t << ")";
        fail(ErrorCode::NoRoot, os.str());
    }
    return roots;
}

PhiDerivatives implicit_derivatives(const PhiSolution& sol, double x, double t, double phi)
{
    Coeff P, Q;
    multipliers(sol, x, t, P, Q);
    const double F = sol.F.value(phi), F1 = sol.F.d1(phi), F2 = sol.F.d2(phi);
    const double G = sol.G.value(phi), G1 = sol.G.d1(phi), G2 = sol.G.d2(phi);
    // R(x, t, phi) = P F + Q G - c
    const double Rp = P.v * F1 + Q.v * G1;
    if (Rp == 0.0)
        fail(ErrorCode::ZeroGradient, "the relation is stationary in phi");
    const double Rx = P.x * F + Q.x * G;
    const double Rt = P.t * F + Q.t * G;
    const double Rxx = P.xx * F + Q.xx * G;
    const double Rtt = P.tt * F + Q.tt * G;
    const double Rxt = P.xt * F + Q.xt * G;
    const double Rxp = P.x * F1 + Q.x * G1;
    const double Rtp = P.t * F1 + Q.t * G1;
    const double Rpp = P.v * F2 + Q.v * G2;
    PhiDerivatives d;
    d.phi = phi;
    d.x = -Rx / Rp;
    d.t = -Rt / Rp;
    d.xx = -(Rxx + 2 * Rxp * d.x + Rpp * d.x * d.x) / Rp;
    d.tt = -(Rtt + 2 * Rtp * d.t + Rpp * d.t * d.t) / Rp;
    d.xt = -(Rxt + Rxp * d.t + Rtp * d.x + Rpp * d.x * d.t) / Rp;
    return d;
}

ScalarField quadratic_phi(double k)
{
    ScalarField s;
    // phi = X^2 / (2 t^2), X = x + k t^2 / 2
    s.f = [k](double x, double t) {
        const double X = x + 0.5 * k * t * t;
        return X * X / (2 * t * t);
    };
    s.fx = [k](double x, double t) { return (x + 0.5 * k * t * t) / (t * t); };
    s.ft = [k](double x, double t) {
        const double X = x + 0.5 * k * t * t;
        return X * (k * t * t - X) / (t * t * t);
    };
    s.fxx = [](double, double t) { return 1.0 / (t * t); };
    s.fxt = [k](double x, double t) {
        const double X = x + 0.5 * k * t * t;
        return (k * t * t - 2 * X) / (t * t * t);
    };
    s.ftt = [k](double x, double t) {
        const double X = x + 0.5 * k * t * t;
        const double Xt = k * t;
        // d/dt [X (k t^2 - X) / t^3]
        const double num = X * (k * t * t - X);
        const double dnum = Xt * (k * t * t - X) + X * (2 * k * t - Xt);
        return dnum / (t * t * t) - 3 * num / (t * t * t * t);
    };
    return s;
}

ScalarField root_phi(double k)
{
    ScalarField s;
    const double r = 1.0 / std::sqrt(2.0);
    // phi = r X / t
    s.f = [k, r](double x, double t) { return r * (x + 0.5 * k * t * t) / t; };
    s.fx = [r](double, double t) { return r / t; };
    s.ft = [k, r](double x, double t) { return r * (0.5 * k - x / (t * t)); };
    s.fxx = [](double, double) { return 0.0; };
    s.fxt = [r](double, double t) { return -r / (t * t); };
    s.ftt = [r](double x, double t) { return 2 * r * x / (t * t * t); };
    return s;
}

} // namespace mongelab
