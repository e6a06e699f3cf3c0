#pragma once

// Implicit solutions lhs(x,t,u) = G(arg(x,t,u)) and the hodograph form
// t = t(x, u) for general polynomial g(x).

#include "mongelab/model.hpp"

#include <vector>

namespace mongelab {

/// c0 + c1 u
struct Affine {
    double c0 = 0.0;
    double c1 = 0.0;
    double operator()(double u) const noexcept { return c0 + c1 * u; }
};

class ImplicitRelation {
public:
    ImplicitRelation(PressureSpec pressure, FunctionHandle G) : pressure_(std::move(pressure)), G_(std::move(G)) {}

    const PressureSpec& pressure() const noexcept { return pressure_; }
    const FunctionHandle& G() const noexcept { return G_; }

    /// The pair members at (x, t), both affine in u.
    Affine lhs(double x, double t) const;
    Affine arg(double x, double t) const;

    /// lhs - G(arg).
    double residual(double x, double t, double u) const;

    /// Largest PDE residual of the level sets of either pair member on a
    /// 10x10 (x, t) grid; make_relation requires it below 1e-8.
    double pair_residual() const;

private:
    PressureSpec pressure_;
    FunctionHandle G_;
};

/// Pairs: None {x+ut, u}; Constant {x+ut-kt^2/2, u-kt};
/// LinearInX {kx cos kt + u sin kt, kx sin kt - u cos kt};
/// TimeOnly {x+ut-int_0^t k(s) s ds, u-int_0^t k(s) ds}.
/// Throws UnsupportedVariant for PolyX and ResidualError if the pair check fails.
ImplicitRelation make_relation(const PressureSpec& pressure, const FunctionHandle& G);

/// G for which the relation reproduces the given initial profile (segment,
/// exponential, or monotone piecewise-linear data).
FunctionHandle relation_G_for_profile(const Profile& profile, const PressureSpec& pressure);

struct URoot {
    double u = 0.0;
    int branch = 0; // index in ascending u
};

struct URoots {
    std::vector<URoot> roots;
    bool no_root = true;
};

/// All roots in u_range (clipped to where G is defined) by scan and bisection.
/// Throws NonFinite if G is NaN inside its declared domain.
URoots solve_u(const ImplicitRelation& rel, double x, double t, Interval u_range, int n_scan = 4096);

/// Scan window: profile range inflated threefold plus the driver's reach.
Interval default_u_range(const Profile& profile, const PressureSpec& pressure, double x, double t);

/// t(x, u) = F(u sqrt(1 + 2(p(x)-p(0))/u^2)) - (1/u) int_0^x dz / sqrt(1 + 2(p(x)-p(z))/u^2).
/// Throws ZeroVelocity for |u| < 1e-12 and TurningPoint where the radicand
/// is not positive on [0, x].
double hodograph_time(const FunctionHandle& F, const PressureSpec& pressure, double x, double u, double tol = 1e-10);

/// The argument passed to F, sqrt(u^2 + 2p(x) - 2p(0)) with the sign of u.
double hodograph_argument(const PressureSpec& pressure, double x, double u);

struct HodographRoots {
    std::vector<double> u;
    bool no_root = true;
    bool truncated = false; // some scan points hit a turning point or u = 0
};

HodographRoots invert_hodograph(const FunctionHandle& F, const PressureSpec& pressure, double x, double t,
                                Interval u_range, int n_scan = 2048);

} // namespace mongelab
