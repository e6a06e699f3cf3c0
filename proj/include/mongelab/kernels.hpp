#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference
// implementation and, on x86-64, an AVX2/FMA variant. The active variant is
// chosen once at runtime from CPU features; MONGELAB_ISA=scalar forces the
// reference path. The two paths agree to rounding (FMA contraction and
// summation order differ), which tests/test_kernels.cpp checks.

#include <cstddef>
#include <span>
#include <string_view>

namespace mongelab::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best ISA supported by both the build and the running CPU.
Isa detected_isa() noexcept;

/// ISA used by the dispatching entry points below.
Isa active_isa() noexcept;

/// Override the dispatch target (tests, benchmarking). Requests for an ISA the
/// CPU cannot run fall back to Scalar; the ISA actually selected is returned.
Isa set_active_isa(Isa isa) noexcept;

/// Batch characteristic trace for a polynomial body force g(x) = sum c_i x^i
/// along dx/dt = -u, du/dt = g(x).
struct Rk4Poly {
    std::span<const double> g_coeffs;
    double t = 0.0;
    int steps = 1024;
};

// Dispatching entry points.

double dot(std::span<const double> a, std::span<const double> b) noexcept;

/// out[i] = sum_k coeffs[k] * x[i]^k
void horner(std::span<const double> coeffs, std::span<const double> x, std::span<double> out) noexcept;

/// Straight/parabolic characteristics: x = x0 - u0 t - k t^2/2, u = u0 + k t.
void trace_affine(std::span<const double> x0, std::span<const double> u0, double k, double t,
                  std::span<double> x, std::span<double> u) noexcept;

/// Rotation in the (x, u/k) plane: x = x0 cos kt - (u0/k) sin kt, u = k x0 sin kt + u0 cos kt.
void trace_rotation(std::span<const double> x0, std::span<const double> u0, double k, double t,
                    std::span<double> x, std::span<double> u) noexcept;

/// Fixed-step RK4 of the characteristic ODEs with polynomial g.
void trace_rk4_poly(const Rk4Poly& cfg, std::span<const double> x0, std::span<const double> u0,
                    std::span<double> x, std::span<double> u) noexcept;

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b) noexcept;
void horner(std::span<const double> coeffs, std::span<const double> x, std::span<double> out) noexcept;
void trace_affine(std::span<const double> x0, std::span<const double> u0, double k, double t,
                  std::span<double> x, std::span<double> u) noexcept;
void trace_rotation(std::span<const double> x0, std::span<const double> u0, double k, double t,
                    std::span<double> x, std::span<double> u) noexcept;
void trace_rk4_poly(const Rk4Poly& cfg, std::span<const double> x0, std::span<const double> u0,
                    std::span<double> x, std::span<double> u) noexcept;
} // namespace scalar

#if defined(MONGELAB_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b) noexcept;
void horner(std::span<const double> coeffs, std::span<const double> x, std::span<double> out) noexcept;
void trace_affine(std::span<const double> x0, std::span<const double> u0, double k, double t,
                  std::span<double> x, std::span<double> u) noexcept;
void trace_rotation(std::span<const double> x0, std::span<const double> u0, double k, double t,
                    std::span<double> x, std::span<double> u) noexcept;
void trace_rk4_poly(const Rk4Poly& cfg, std::span<const double> x0, std::span<const double> u0,
                    std::span<double> x, std::span<double> u) noexcept;
} // namespace avx2
#endif

} // namespace mongelab::kernels
