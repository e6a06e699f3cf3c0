#pragma once

// The dimension-doubled linear form of u_t = u u_x + g. A solution u is
// carried as the bijet of U(x, a) = (exp(a (u - u_p)) - 1) / a about (x0, 0),
// where u_p is a known particular solution of the driven equation. Without a
// driver U evolves by dU/dt = d2U/dx da, i.e. by the kernel exp(t d2/dx da).
//
// With u = w + u_p the field satisfies
//     U_t = U_xa + u_p U_x + u_p,x (1 + a d/da) U,
// and with u_p = 0 under a general g(x, t)
//     U_t = U_xa + a g U + g.

#include "mongelab/bijet.hpp"
#include "mongelab/jet.hpp"
#include "mongelab/model.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <vector>

namespace mongelab {

enum class Particular {
    Zero,
    ConstGradShift, // u_p = k t
    LinGradTan,     // u_p = k x tan(k t)
};

enum class Generator { Dt, Da, Dx, Boost };
using OperatorWord = std::vector<Generator>;

/// Kernel-evolved doubled field. The source profile is kept so the field can
/// be re-lifted exactly at shifted or rescaled expansion points.
struct DoubledField {
    enum class Origin { Kernel, Series };

    BiJet bijet;
    double t = 0.0;
    Particular particular = Particular::Zero;
    double k = 0.0;
    Origin origin = Origin::Kernel;
    Profile source;
    PressureSpec pressure;
    int series_order = 40; // Series origin only

    // Set by solution_family: the field is then (exp(a u) - 1)/a with no
    // particular part removed, acted on by `word`, plus singular/a.
    bool full = false;
    OperatorWord word;
    double singular = 1.0;

    double x0() const noexcept { return bijet.x0(); }
    int nx() const noexcept { return bijet.nx(); }
    int na() const noexcept { return bijet.na(); }
};

/// Lift of a profile at t = 0. The particular part recorded follows the
/// driver: None -> Zero, Constant -> ConstGradShift, LinearInX -> LinGradTan;
/// PolyX and TimeOnly use Zero and are advanced through the series engine.
DoubledField lift(const Profile& profile, const PressureSpec& pressure, double x0, int nx, int na);

/// Bijet of (exp(a u) - 1)/a for a jet u, truncated to (nx, na).
BiJet lift_jet(const Jet& u, int nx, int na);

/// exp(t d2/dx da) applied to a truncated bijet.
BiJet free_kernel(const BiJet& f, double t);

/// Kernel evolution of a t = 0 field. Each sets the particular part and the
/// driver of the result. Throws DomainError unless f.t == 0.
DoubledField evolve_free(const DoubledField& f, double t);
DoubledField evolve_const_grad(const DoubledField& f, double k, double t);
/// Throws PoleError when cos(k t) vanishes.
DoubledField evolve_lin_grad(const DoubledField& f, double k, double t);
/// Dispatch on the field's driver. PolyX and TimeOnly drivers use the lift of
/// the series-engine solution at time t instead of a kernel.
DoubledField evolve(const DoubledField& f, double t);

/// a^0 layer plus the particular part at f.t, as a jet in x about x0.
Jet extract_u(const DoubledField& f);

/// Max over coefficients with i <= nx/2, j <= na/2 of |U_t - L U|, where L is
/// the spatial operator of the field's own equation. U_t is a central
/// difference of two re-evolutions at t +- dt, or exact when dt == 0.
double diffusion_residual(const DoubledField& f, double dt);

/// Same check for an arbitrary family of bijets t -> U(t) that should satisfy
/// U_t = U_xa + u_p U_x + u_p,x (1 + a d/da) U + a g U + g s.
/// Throws DomainError unless dt > 0.
struct LinearOperator {
    std::function<Jet(double)> up; // u_p(x, t) as a jet about x0; empty means 0
    std::function<Jet(double)> g;  // g(x, t) as a jet about x0; empty means 0
    double singular = 0.0;
};
double diffusion_residual(const std::function<BiJet(double)>& family, const LinearOperator& op, double t, double dt);

/// Taylor coefficients in t of u(x, t) about t = 0 computed through the
/// kernel with t carried as a jet. coeffs[n] is the x-jet of order x_order
/// multiplying t^n.
std::vector<Jet> time_taylor(const Profile& profile, const PressureSpec& pressure, double x0, int order,
                             int x_order = 0);

/// Applies an operator word, right to left, built from d/dt, d/da, d/dx and
/// the boost x d/dx - a d/da. Throws NotCommuting for generators that do not
/// commute with the driver's linear operator (None: all four; LinearInX: Dt,
/// Boost; Constant: Dt, Dx; PolyX: Dt; TimeOnly: Dx).
DoubledField solution_family(const DoubledField& f, const OperatorWord& word);
bool commutes(Generator gen, const PressureSpec& pressure);

/// Algebra of A = d2/dx da, B = a d/da, C = 1 + x d/dx - a d/da on the
/// monomials x^i a^j about x0 with i < nx, j < na. Each entry is the largest
/// coefficient of the named operator combination.
struct AlgebraCheck {
    double ab_minus_a = 0.0; // [A, B] - A
    double ac = 0.0;         // [A, C]
    double bc = 0.0;         // [B, C]
};
AlgebraCheck algebra_check(int nx, int na, double x0 = 0.0);

BiJet apply_A(const BiJet& f);
BiJet apply_B(const BiJet& f);
BiJet apply_C(const BiJet& f);

// Galilean covariance -------------------------------------------------------

/// u(x, t) with a box where it is known to be smooth.
struct SolutionHandle {
    std::function<double(double, double)> u;
    Interval x{-1.0, 1.0};
    Interval t{0.5, 1.5};
};

/// Max of |u_t - u u_x - g| over an n x n grid of the handle's box, with
/// fourth-order central differences.
double pde_residual(const SolutionHandle& sol, const std::function<double(double, double)>& g, int n = 10);
double pde_residual_at(const std::function<double(double, double)>& u, const std::function<double(double, double)>& g,
                       double x, double t);

/// u(x + k t^2/2, t) + k t. Throws ResidualError if u_sol fails the
/// undriven equation on its box.
SolutionHandle covariance_const(const SolutionHandle& u_sol, double k);
/// u(x / cos kt, tan(kt)/k) / cos kt + k x tan kt. Same checks.
SolutionHandle covariance_linear(const SolutionHandle& u_sol, double k);

// Transport factors ---------------------------------------------------------

/// f(x, t) with optional analytic partials.
struct ClosedForm {
    std::function<double(double, double)> f;
    std::function<double(double, double)> fx;
    std::function<double(double, double)> ft;
};

struct Grid {
    Interval x{-1.0, 1.0};
    Interval t{0.1, 1.0};
    int nx = 10;
    int nt = 10;
};

/// Max |v_t - (u v)_x| on the grid. Throws PoleOnGrid where either form is
/// not finite.
double verify_v_factor(const ClosedForm& u, const ClosedForm& v, const Grid& grid);

/// The two built-in (u, v) pairs: (k x tan kt, -1/cos kt) and
/// (-k x cot kt, 1/sin kt).
std::pair<ClosedForm, ClosedForm> tan_pair(double k);
std::pair<ClosedForm, ClosedForm> cot_pair(double k);

// Serialization -------------------------------------------------------------

nlohmann::json bijet_to_json(const BiJet& b);
BiJet bijet_from_json(const nlohmann::json& j);

} // namespace mongelab
