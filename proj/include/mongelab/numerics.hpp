#pragma once

// Root bracketing, bisection and adaptive quadrature shared by the solvers.

#include <functional>
#include <vector>

namespace mongelab::numerics {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature by panel bisection. Stops when the
/// summed error estimate is below max(tol, tol*|I|) or max_panels is reached.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                     int max_panels = 1 << 14);

/// Bisection on a sign-changing bracket [a, b]; returns the midpoint once the
/// bracket is narrower than xtol (relative to max(1, |x|)).
double bisect(const std::function<double(double)>& f, double a, double b, double xtol = 1e-14, int max_iter = 200);

struct Bracket {
    double lo;
    double hi;
};

/// Sign-change brackets of f on n uniform points over [a, b]. Exact zeros on
/// the grid produce a degenerate bracket. Infinite samples keep their sign;
/// NaN samples are reported via the callback (or skipped when none is given).
std::vector<Bracket> scan_brackets(const std::function<double(double)>& f, double a, double b, int n,
                                   const std::function<void(double)>& on_nonfinite = {});

/// All roots of f on [a, b] found by scan plus bisection, sorted ascending.
std::vector<double> find_roots(const std::function<double(double)>& f, double a, double b, int n,
                               double xtol = 1e-14, const std::function<void(double)>& on_nonfinite = {});

/// Second-order central differences.
double d1_central(const std::function<double(double)>& f, double x, double h);
double d2_central(const std::function<double(double)>& f, double x, double h);

} // namespace mongelab::numerics
