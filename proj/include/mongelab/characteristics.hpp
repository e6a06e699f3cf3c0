#pragma once

// Characteristics of u_t = u u_x + g: dx/dtau = -u, du/dtau = g. Used as an
// independent oracle for the other solvers and for shock fitting.
//
// Shock speed in this sign convention follows from u_t = (u^2/2)_x:
//     ds/dt = -(u_left + u_right) / 2.

#include "mongelab/model.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace mongelab {

struct TraceOptions {
    int rk4_steps = 1024;
    bool force_numeric = false; // use RK4 even when a closed form exists
};

struct Phase {
    double x = 0.0;
    double u = 0.0;
};

/// Position and velocity at time t of the characteristic leaving (x0, u0).
Phase trace(double x0, double u0, const PressureSpec& pressure, double t, const TraceOptions& opt = {});

/// Batch form; dispatches to the SIMD kernels where available.
void trace_batch(std::span<const double> x0, std::span<const double> u0, const PressureSpec& pressure, double t,
                 std::span<double> x, std::span<double> u, const TraceOptions& opt = {});

/// d(x, u) / d(x0, u0) of the trace map, row-major {xx0, xu0, ux0, uu0}.
std::array<double, 4> trace_jacobian(double x0, double u0, const PressureSpec& pressure, double t,
                                     const TraceOptions& opt = {});

struct FrontSample {
    double seed = 0.0;
    double x = 0.0;
    double u = 0.0;
    int branch = 0; // monotone piece of x(seed), counted from the left seed
};

struct FrontCurve {
    std::vector<FrontSample> samples;
    double t = 0.0;
    bool multivalued = false;
    bool break_detected = false;
    std::vector<std::size_t> turning; // sample indices where x(seed) reverses
    // Retained for exact refinement of shock fits.
    std::optional<Profile> source;
    PressureSpec pressure;
    TraceOptions options;
};

/// Uniform seeds over the profile's support widened by the distance
/// characteristics can travel by time t, plus every profile node. A finite
/// `cover` is merged into the support first.
std::vector<double> default_seeds(const Profile& profile, const PressureSpec& pressure, double t, int n = 2048,
                                  Interval cover = {});

/// Throws DomainError unless seeds are strictly increasing.
FrontCurve evolve_front(const Profile& profile, const PressureSpec& pressure, double t,
                        const std::vector<double>& seeds, const TraceOptions& opt = {});

/// All u(x, t) reached by characteristics, sorted ascending, with their seeds.
struct PointValues {
    std::vector<double> u;
    std::vector<double> seeds;
};
PointValues solve_at(const Profile& profile, const PressureSpec& pressure, double x, double t,
                     const TraceOptions& opt = {}, int n_seeds = 4096);
/// Same, reusing a front built by evolve_front.
PointValues solve_on_front(const FrontCurve& front, double x);

/// u^2/2 + p(x). Throws UnsupportedVariant for TimeOnly drivers.
double riemann_invariant(double x, double u, const PressureSpec& pressure);

struct ShockFit {
    double position = 0.0;
    double u_left = 0.0;
    double u_right = 0.0;
    double area_residual = 0.0;
    double seed_left = 0.0;  // chord endpoints on the curve
    double seed_mid = 0.0;   // interior crossing
    double seed_right = 0.0;
    double u_mid = 0.0;
};

/// Vertical chord cutting a zero-area lobe from a single S-shaped fold.
/// Throws NotMultivalued or MultipleFolds.
ShockFit equal_area_shock(const FrontCurve& front);

/// int u dx along the curve (the signed area for a folded curve).
double bump_area(const FrontCurve& front);
/// Area of the shock-fitted single-valued profile.
double bump_area(const FrontCurve& front, const ShockFit& shock);

} // namespace mongelab
