#pragma once

namespace mongelab {

enum class Branch { W0, Wm1 };

/// Real Lambert W: the w with w e^w = z on the selected branch.
/// W0 is defined on [-1/e, inf), W-1 on [-1/e, 0). Throws Error(DomainError)
/// outside the branch domain; arguments within one ulp below -1/e are clamped.
double lambert_w(Branch branch, double z);

/// Partial sum -sum_{n=1..N} n^{n-1} (-z)^n / n! of the principal-branch
/// series. Converges for |z| < 1/e; no range check is made.
double lambert_w_series(double z, int n_terms);

/// -1/e to full double precision.
inline constexpr double lambert_branch_point = -0.36787944117144233;

} // namespace mongelab
