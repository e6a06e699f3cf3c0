#pragma once

// Power series in t of the solution at a fixed point, the break-time
// estimates derived from it, and the exponential-front closed forms.

#include "mongelab/jet.hpp"
#include "mongelab/lambertw.hpp"
#include "mongelab/model.hpp"

#include <vector>

namespace mongelab {

/// u(x, t) = sum_n t^n u_n(x), each u_n kept as a jet at x0. The jet order
/// drops by one per step.
struct TimeSeries {
    double x0 = 0.0;
    std::vector<Jet> coeffs;
    PressureSpec pressure;

    int order() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
    /// u_n(x0).
    double at(int n) const { return coeffs[static_cast<std::size_t>(n)].value(); }
    std::vector<double> values() const;
};

/// Runs (n+1) u_{n+1} = 1/2 d/dx sum_j u_j u_{n-j} (+ g on the first step,
/// + k_n for a TimeOnly driver). jet_order < 0 selects max(32, 2*order).
/// Throws OrderError if jet_order < 2*order.
TimeSeries build_series(const Profile& profile, const PressureSpec& pressure, double x0, int order,
                        int jet_order = -1);

/// Same recurrence started from an explicit jet of u(x, 0).
TimeSeries build_series(const Jet& u0, const PressureSpec& pressure, int order);

struct SeriesValue {
    double u = 0.0;
    double err = 0.0;        // magnitude of the last retained term
    bool diverging = false;  // last-term ratio >= 1
};

SeriesValue eval_series(const TimeSeries& ts, double t);

/// Radius of convergence from a least-squares fit r_n = c0 + c1/n to the last
/// eight coefficient ratios; returns +inf when c0 vanishes. Throws
/// InsufficientData with fewer than twelve nonzero coefficients or a gap
/// among the last nine.
double break_time_ratio(const TimeSeries& ts);

/// Break time of segment or exponential data at position x. Throws NoBreak
/// when the profile never steepens forward in time.
double break_time_closed(const Profile& profile, const PressureSpec& pressure, double x);

/// Exponential front A e^{x/L} evolved to time t on the chosen Lambert branch
/// (None, Constant and LinearInX drivers).
double lambert_front(double A, double L, const PressureSpec& pressure, double x, double t, Branch branch);

/// The Lambert argument whose value -1/e marks the vertical face.
double lambert_front_argument(double A, double L, const PressureSpec& pressure, double x, double t);

/// x(t) = L (ln(L/A) - 1 - ln t).
double front_face_position(double A, double L, double t);

/// Closed-form evolution of u = alpha + beta x under None, Constant and
/// LinearInX drivers.
double segment_closed(double alpha, double beta, const PressureSpec& pressure, double x, double t);

} // namespace mongelab
