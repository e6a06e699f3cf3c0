#include "mongelab/kernels.hpp"

#include <cmath>

namespace mongelab::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) noexcept
{
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sum += a[i] * b[i];
    return sum;
}

void horner(std::span<const double> coeffs, std::span<const double> x, std::span<double> out) noexcept
{
    for (std::size_t i = 0; i < x.size(); ++i) {
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;)
            acc = acc * x[i] + coeffs[k];
        out[i] = acc;
    }
}

void trace_affine(std::span<const double> x0, std::span<const double> u0, double k, double t,
                  std::span<double> x, std::span<double> u) noexcept
{
    const double drift = 0.5 * k * t * t;
    const double kick = k * t;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        x[i] = x0[i] - u0[i] * t - drift;
        u[i] = u0[i] + kick;
    }
}

void trace_rotation(std::span<const double> x0, std::span<const double> u0, double k, double t,
                    std::span<double> x, std::span<double> u) noexcept
{
    const double c = std::cos(k * t);
    const double s = std::sin(k * t);
    const double s_over_k = (k == 0.0) ? t : s / k;
    const double ks = k * s;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        x[i] = x0[i] * c - u0[i] * s_over_k;
        u[i] = x0[i] * ks + u0[i] * c;
    }
}

namespace {

inline double poly_at(std::span<const double> c, double x) noexcept
{
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;)
        acc = acc * x + c[k];
    return acc;
}

} // namespace

void trace_rk4_poly(const Rk4Poly& cfg, std::span<const double> x0, std::span<const double> u0,
                    std::span<double> x, std::span<double> u) noexcept
{
    const double h = cfg.t / cfg.steps;
    const double h2 = 0.5 * h;
    const double h6 = h / 6.0;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        double xi = x0[i];
        double ui = u0[i];
        for (int s = 0; s < cfg.steps; ++s) {
            const double kx1 = -ui;
            const double ku1 = poly_at(cfg.g_coeffs, xi);
            const double kx2 = -(ui + h2 * ku1);
            const double ku2 = poly_at(cfg.g_coeffs, xi + h2 * kx1);
            const double kx3 = -(ui + h2 * ku2);
            const double ku3 = poly_at(cfg.g_coeffs, xi + h2 * kx2);
            const double kx4 = -(ui + h * ku3);
            const double ku4 = poly_at(cfg.g_coeffs, xi + h * kx3);
            xi += h6 * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4);
            ui += h6 * (ku1 + 2.0 * ku2 + 2.0 * ku3 + ku4);
        }
        x[i] = xi;
        u[i] = ui;
    }
}

} // namespace mongelab::kernels::scalar
