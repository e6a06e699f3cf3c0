// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "mongelab/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace mongelab::kernels::avx2 {

namespace {

inline double hsum(__m256d v) noexcept
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
    return _mm_cvtsd_f64(s);
}

inline __m256d poly_at(std::span<const double> c, __m256d x) noexcept
{
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = c.size(); k-- > 0;)
        acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(c[k]));
    return acc;
}

} // namespace

double dot(std::span<const double> a, std::span<const double> b) noexcept
{
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i)
        sum += a[i] * b[i];
    return sum;
}

void horner(std::span<const double> coeffs, std::span<const double> x, std::span<double> out) noexcept
{
    std::size_t i = 0;
    for (; i + 4 <= x.size(); i += 4)
        _mm256_storeu_pd(out.data() + i, poly_at(coeffs, _mm256_loadu_pd(x.data() + i)));
    for (; i < x.size(); ++i) {
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
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d vdrift = _mm256_set1_pd(drift);
    const __m256d vkick = _mm256_set1_pd(kick);
    std::size_t i = 0;
    for (; i + 4 <= x0.size(); i += 4) {
        const __m256d vx0 = _mm256_loadu_pd(x0.data() + i);
        const __m256d vu0 = _mm256_loadu_pd(u0.data() + i);
        _mm256_storeu_pd(x.data() + i, _mm256_sub_pd(_mm256_fnmadd_pd(vu0, vt, vx0), vdrift));
        _mm256_storeu_pd(u.data() + i, _mm256_add_pd(vu0, vkick));
    }
    for (; i < x0.size(); ++i) {
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
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vsk = _mm256_set1_pd(s_over_k);
    const __m256d vks = _mm256_set1_pd(ks);
    std::size_t i = 0;
    for (; i + 4 <= x0.size(); i += 4) {
        const __m256d vx0 = _mm256_loadu_pd(x0.data() + i);
        const __m256d vu0 = _mm256_loadu_pd(u0.data() + i);
        _mm256_storeu_pd(x.data() + i, _mm256_fnmadd_pd(vu0, vsk, _mm256_mul_pd(vx0, vc)));
        _mm256_storeu_pd(u.data() + i, _mm256_fmadd_pd(vx0, vks, _mm256_mul_pd(vu0, vc)));
    }
    for (; i < x0.size(); ++i) {
        x[i] = x0[i] * c - u0[i] * s_over_k;
        u[i] = x0[i] * ks + u0[i] * c;
    }
}

void trace_rk4_poly(const Rk4Poly& cfg, std::span<const double> x0, std::span<const double> u0,
                    std::span<double> x, std::span<double> u) noexcept
{
    const double h = cfg.t / cfg.steps;
    const __m256d vh = _mm256_set1_pd(h);
    const __m256d vh2 = _mm256_set1_pd(0.5 * h);
    const __m256d vh6 = _mm256_set1_pd(h / 6.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= x0.size(); i += 4) {
        __m256d xi = _mm256_loadu_pd(x0.data() + i);
        __m256d ui = _mm256_loadu_pd(u0.data() + i);
        for (int s = 0; s < cfg.steps; ++s) {
            const __m256d kx1 = _mm256_xor_pd(ui, sign);
            const __m256d ku1 = poly_at(cfg.g_coeffs, xi);
            const __m256d kx2 = _mm256_xor_pd(_mm256_fmadd_pd(vh2, ku1, ui), sign);
            const __m256d ku2 = poly_at(cfg.g_coeffs, _mm256_fmadd_pd(vh2, kx1, xi));
            const __m256d kx3 = _mm256_xor_pd(_mm256_fmadd_pd(vh2, ku2, ui), sign);
            const __m256d ku3 = poly_at(cfg.g_coeffs, _mm256_fmadd_pd(vh2, kx2, xi));
            const __m256d kx4 = _mm256_xor_pd(_mm256_fmadd_pd(vh, ku3, ui), sign);
            const __m256d ku4 = poly_at(cfg.g_coeffs, _mm256_fmadd_pd(vh, kx3, xi));
            const __m256d sx = _mm256_add_pd(_mm256_add_pd(kx1, kx4), _mm256_mul_pd(two, _mm256_add_pd(kx2, kx3)));
            const __m256d su = _mm256_add_pd(_mm256_add_pd(ku1, ku4), _mm256_mul_pd(two, _mm256_add_pd(ku2, ku3)));
            xi = _mm256_fmadd_pd(vh6, sx, xi);
            ui = _mm256_fmadd_pd(vh6, su, ui);
        }
        _mm256_storeu_pd(x.data() + i, xi);
        _mm256_storeu_pd(u.data() + i, ui);
    }
    if (i < x0.size())
        scalar::trace_rk4_poly(cfg, x0.subspan(i), u0.subspan(i), x.subspan(i), u.subspan(i));
}

} // namespace mongelab::kernels::avx2
