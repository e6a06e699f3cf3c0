#include "mongelab/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace mongelab::kernels {

namespace {

bool cpu_has_avx2() noexcept
{
#if defined(MONGELAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() noexcept
{
    const Isa best = detected_isa();
    if (const char* env = std::getenv("MONGELAB_ISA"); env != nullptr && std::strcmp(env, "scalar") == 0)
        return Isa::Scalar;
    return best;
}

std::atomic<Isa>& active() noexcept
{
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

} // namespace

std::string_view isa_name(Isa isa) noexcept
{
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

Isa detected_isa() noexcept
{
    static const Isa isa = cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
    return isa;
}

Isa active_isa() noexcept
{
    return active().load(std::memory_order_relaxed);
}

Isa set_active_isa(Isa isa) noexcept
{
    const Isa chosen = (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) ? Isa::Scalar : isa;
    active().store(chosen, std::memory_order_relaxed);
    return chosen;
}

#if defined(MONGELAB_HAVE_AVX2)
#define MONGELAB_DISPATCH(fn, ...)                                                                     \
    (active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define MONGELAB_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double dot(std::span<const double> a, std::span<const double> b) noexcept
{
    return MONGELAB_DISPATCH(dot, a, b);
}

void horner(std::span<const double> coeffs, std::span<const double> x, std::span<double> out) noexcept
{
    MONGELAB_DISPATCH(horner, coeffs, x, out);
}

void trace_affine(std::span<const double> x0, std::span<const double> u0, double k, double t,
                  std::span<double> x, std::span<double> u) noexcept
{
    MONGELAB_DISPATCH(trace_affine, x0, u0, k, t, x, u);
}

void trace_rotation(std::span<const double> x0, std::span<const double> u0, double k, double t,
                    std::span<double> x, std::span<double> u) noexcept
{
    MONGELAB_DISPATCH(trace_rotation, x0, u0, k, t, x, u);
}

void trace_rk4_poly(const Rk4Poly& cfg, std::span<const double> x0, std::span<const double> u0,
                    std::span<double> x, std::span<double> u) noexcept
{
    MONGELAB_DISPATCH(trace_rk4_poly, cfg, x0, u0, x, u);
}

#undef MONGELAB_DISPATCH

} // namespace mongelab::kernels
