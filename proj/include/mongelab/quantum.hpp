#pragma once

// Free Schroedinger evolution psi_t = i kappa psi_xx in one dimension and the
// point-split density rho(x, t, a) = conj(psi(x - a, t)) psi(x + a, t), which
// obeys rho_t = i kappa rho_xa.

#include <complex>
#include <variant>

namespace mongelab {

using cplx = std::complex<double>;

struct PlaneWave {
    double p = 1.0;
};

/// Spreading Gaussian with complex width sigma^2 + i kappa t, peak value
/// (2 pi sigma^2)^(-1/4) at t = 0.
struct GaussianPacket {
    double sigma = 1.0;
    double p0 = 0.0;
    double x_c = 0.0;
};

struct WaveSpec {
    std::variant<PlaneWave, GaussianPacket> v;
    double kappa = 0.5;
};

cplx psi(const WaveSpec& spec, double x, double t);

/// d^n psi / dx^n (n_t = 0) or d^n psi_t / dx^n (n_t = 1), from the closed form.
cplx psi_derivative(const WaveSpec& spec, int n_x, int n_t, double x, double t);

/// |psi_t - i kappa psi_xx|.
double schrodinger_residual(const WaveSpec& spec, double x, double t);

cplx split_density(const WaveSpec& spec, double x, double t, double a);

/// d^p/dx^p d^q/da^q d^r/dt^r rho with r <= 1 and p + q <= 12.
cplx density_derivative(const WaveSpec& spec, int p, int q, int r, double x, double t, double a);

/// |rho_t - i kappa rho_xa|; kappa_check replaces the spec's kappa when
/// positive.
double continuity_residual(const WaveSpec& spec, double x, double t, double a, double kappa_check = 0.0);

/// J = i kappa rho_a.
cplx current(const WaveSpec& spec, double x, double t, double a);

/// m-th a-derivative of rho. Throws OrderTooHigh for m > 4.
cplx conserved_tensor(const WaveSpec& spec, int order, double x, double t, double a);
/// The continuity residual of the m-th tensor.
double tensor_residual(const WaveSpec& spec, int order, double x, double t, double a);

/// Residual of (x d/dx - a d/da) rho.
double boost_residual(const WaveSpec& spec, double x, double t, double a);

} // namespace mongelab
