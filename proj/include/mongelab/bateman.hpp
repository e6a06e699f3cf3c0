#pragma once

// Potentials phi(x, t) with u = phi_t / phi_x. Such a u solves
// u_t = u u_x + g exactly when
//     phi_x^2 phi_tt - 2 phi_x phi_t phi_xt + phi_t^2 phi_xx = phi_x^3 g.

#include "mongelab/model.hpp"

#include <functional>
#include <vector>

namespace mongelab {

/// Implicit family P(x, t) F(phi) + Q(x, t) G(phi) = c with
///   Classic:   P = x,            Q = t
///   ConstGrad: P = x + k t^2/2,  Q = t         (g = k)
///   LinGrad:   P = sin(kt) / x,  Q = cos(kt)/x (g = k^2 x)
struct PhiSolution {
    enum class Variant { Classic, ConstGrad, LinGrad };

    FunctionHandle F;
    FunctionHandle G;
    double c = 0.0;
    Variant variant = Variant::Classic;
    double k = 0.0;

    /// The body force this family solves against.
    double g(double x) const;
};

/// phi and its partials up to second order at one point.
struct PhiDerivatives {
    double phi = 0.0;
    double x = 0.0, t = 0.0;    // first partials
    double xx = 0.0, tt = 0.0, xt = 0.0;
};

/// phi(x, t) with optional analytic partials; any missing partial is taken by
/// central differences.
struct ScalarField {
    std::function<double(double, double)> f;
    std::function<double(double, double)> fx, ft, fxx, ftt, fxt;
};

/// Throws ZeroGradient when phi_x = 0.
double u_from_phi(double phi_t, double phi_x);

/// |LHS - phi_x^3 g| / (|phi_x|^3 + |phi_t|^3 + 1e-30). h <= 0 selects
/// 1e-5 max(1, |x|, |t|) for first partials; second partials use 100 h with
/// one Richardson step. Throws DegeneratePoint when both first partials
/// vanish.
double bateman_residual(const ScalarField& phi, double g_value, double x, double t, double h = 0.0);
double bateman_residual(const PhiDerivatives& d, double g_value);

/// Partials of a field at (x, t), analytic where given.
PhiDerivatives differentiate(const ScalarField& phi, double x, double t, double h = 0.0);

/// All roots of the defining relation in phi_range, by a 4096-point scan and
/// bisection. Throws NoRoot, DegenerateCoefficients when P and Q both
/// vanish, and DomainError for LinGrad at x = 0.
std::vector<double> solve_phi(const PhiSolution& sol, double x, double t, Interval phi_range, int n_scan = 4096);

/// Partials of the root phi by implicit differentiation of the relation.
PhiDerivatives implicit_derivatives(const PhiSolution& sol, double x, double t, double phi);

/// (x + k t^2/2)^2 / (2 t^2) and its square root (x + k t^2/2) / (sqrt(2) t),
/// both with analytic partials. They solve the equation with g = k.
ScalarField quadratic_phi(double k);
ScalarField root_phi(double k);

} // namespace mongelab
