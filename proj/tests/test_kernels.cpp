// Scalar reference kernels against the dispatched (AVX2 where available) path.

#include "mongelab/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace mongelab;

namespace {

struct Inputs {
    std::vector<double> x0, u0;
};

// Odd length so the vector tails are exercised.
Inputs random_inputs(std::size_t n = 1027)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    Inputs in;
    for (std::size_t i = 0; i < n; ++i) {
        in.x0.push_back(d(rng));
        in.u0.push_back(d(rng));
    }
    return in;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
    return m;
}

struct ForceIsa {
    explicit ForceIsa(kernels::Isa isa) : prev(kernels::active_isa()) { kernels::set_active_isa(isa); }
    ~ForceIsa() { kernels::set_active_isa(prev); }
    kernels::Isa prev;
};

} // namespace

TEST_CASE("detected ISA is selectable")
{
    const auto isa = kernels::detected_isa();
    ForceIsa f(isa);
    CHECK(kernels::active_isa() == isa);
    CHECK(kernels::set_active_isa(kernels::Isa::Scalar) == kernels::Isa::Scalar);
    MESSAGE("detected ISA: " << kernels::isa_name(isa));
}

TEST_CASE("dot and horner agree with the scalar reference")
{
    const auto in = random_inputs();
    ForceIsa f(kernels::detected_isa());
    const double ref = kernels::scalar::dot(in.x0, in.u0);
    CHECK(std::abs(kernels::dot(in.x0, in.u0) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));

    const std::vector<double> c{0.3, -1.0, 0.25, 0.5, -0.125};
    std::vector<double> a(in.x0.size()), b(in.x0.size());
    kernels::scalar::horner(c, in.x0, a);
    kernels::horner(c, in.x0, b);
    CHECK(max_rel(b, a) <= 1e-14);
    for (std::size_t i = 0; i < 5; ++i) {
        const double x = in.x0[i];
        double direct = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k)
            direct += c[k] * std::pow(x, static_cast<double>(k));
        CHECK(a[i] == doctest::Approx(direct).epsilon(1e-14));
    }
}

TEST_CASE("trace kernels agree with the scalar reference")
{
    const auto in = random_inputs();
    const std::size_t n = in.x0.size();
    ForceIsa f(kernels::detected_isa());
    std::vector<double> xs(n), us(n), xv(n), uv(n);

    kernels::scalar::trace_affine(in.x0, in.u0, 0.7, 1.3, xs, us);
    kernels::trace_affine(in.x0, in.u0, 0.7, 1.3, xv, uv);
    CHECK(max_rel(xv, xs) <= 1e-14);
    CHECK(max_rel(uv, us) <= 1e-14);
    CHECK(xs[3] == doctest::Approx(in.x0[3] - in.u0[3] * 1.3 - 0.5 * 0.7 * 1.69).epsilon(1e-15));

    kernels::scalar::trace_rotation(in.x0, in.u0, 0.9, 0.6, xs, us);
    kernels::trace_rotation(in.x0, in.u0, 0.9, 0.6, xv, uv);
    CHECK(max_rel(xv, xs) <= 1e-14);
    CHECK(max_rel(uv, us) <= 1e-14);

    const std::vector<double> g{0.1, 0.5, 0.0, 0.3};
    kernels::Rk4Poly cfg{g, 2.0, 512};
    kernels::scalar::trace_rk4_poly(cfg, in.x0, in.u0, xs, us);
    kernels::trace_rk4_poly(cfg, in.x0, in.u0, xv, uv);
    CHECK(max_rel(xv, xs) <= 1e-12);
    CHECK(max_rel(uv, us) <= 1e-12);
}

TEST_CASE("RK4 kernel reproduces the rotation for g = k^2 x")
{
    const auto in = random_inputs(64);
    const double k = 0.8, t = 1.7;
    const std::vector<double> g{0.0, k * k};
    std::vector<double> x(64), u(64);
    kernels::scalar::trace_rk4_poly({g, t, 2048}, in.x0, in.u0, x, u);
    for (std::size_t i = 0; i < 64; ++i) {
        const double c = std::cos(k * t), s = std::sin(k * t);
        CHECK(x[i] == doctest::Approx(in.x0[i] * c - in.u0[i] / k * s).epsilon(1e-11));
        CHECK(u[i] == doctest::Approx(k * in.x0[i] * s + in.u0[i] * c).epsilon(1e-11));
    }
}
