#include "mongelab/quantum.hpp"

#include "mongelab/error.hpp"
#include "mongelab/jet.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace mongelab {

namespace {

constexpr const char* kModule = "quantum";
constexpr cplx I{0.0, 1.0};

struct GaussJets {
    ComplexJet psi;
    ComplexJet psi_t;
};

// psi and psi_t as jets in x about x0, straight from the closed form.
GaussJets gauss_jets(const GaussianPacket& g, double kappa, double x0, double t, int order)
{
    const cplx s = cplx(g.sigma * g.sigma, kappa * t);
    const ComplexJet xi = ComplexJet::variable(x0, order);
    const ComplexJet y = xi - cplx(g.x_c + 2.0 * kappa * g.p0 * t);
    const cplx lead = -0.25 * std::log(2.0 * std::numbers::pi * g.sigma * g.sigma) +
                      0.5 * std::log(cplx(g.sigma * g.sigma) / s) - I * kappa * g.p0 * g.p0 * t;
    const ComplexJet E = y * y * (-1.0 / (4.0 * s)) + (xi - cplx(g.x_c)) * (I * g.p0) + lead;
    const ComplexJet psi = exp(E);
    const ComplexJet L = y * y * (I * kappa / (4.0 * s * s)) + y * cplx(kappa * g.p0 / s) +
                         (-I * kappa / (2.0 * s) - I * kappa * g.p0 * g.p0);
    return {psi, psi * L};
}

double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

ComplexJet conj_jet(const ComplexJet& j)
{
    std::vector<cplx> c = j.coeffs();
    for (auto& v : c)
        v = std::conj(v);
    return ComplexJet(j.x0(), std::move(c), j.order());
}

} // namespace

cplx psi(const WaveSpec& spec, double x, double t)
{
    return psi_derivative(spec, 0, 0, x, t);
}

cplx psi_derivative(const WaveSpec& spec, int n_x, int n_t, double x, double t)
{
    if (n_x < 0 || n_t < 0 || n_t > 1)
        throw Error(ErrorCode::OrderTooHigh, kModule, "psi derivatives need n_t in {0, 1}");
    if (const auto* pw = std::get_if<PlaneWave>(&spec.v)) {
        const double p = pw->p;
        cplx v = std::exp(I * (p * x - spec.kappa * p * p * t));
        v *= std::pow(I * p, n_x);
        if (n_t == 1)
            v *= -I * spec.kappa * p * p;
        return v;
    }
    const auto& g = std::get<GaussianPacket>(spec.v);
    const GaussJets j = gauss_jets(g, spec.kappa, x, t, n_x);
    const ComplexJet& src = n_t == 0 ? j.psi : j.psi_t;
    return src[static_cast<std::size_t>(n_x)] * factorial(n_x);
}

double schrodinger_residual(const WaveSpec& spec, double x, double t)
{
    return std::abs(psi_derivative(spec, 0, 1, x, t) - I * spec.kappa * psi_derivative(spec, 2, 0, x, t));
}

cplx split_density(const WaveSpec& spec, double x, double t, double a)
{
    return density_derivative(spec, 0, 0, 0, x, t, a);
}

cplx density_derivative(const WaveSpec& spec, int p, int q, int r, double x, double t, double a)
{
    if (p < 0 || q < 0 || r < 0 || r > 1 || p + q > 12)
        throw Error(ErrorCode::OrderTooHigh, kModule, "density derivatives need r <= 1 and p + q <= 12");
    if (const auto* pw = std::get_if<PlaneWave>(&spec.v)) {
        // rho = exp(2 i p a)
        if (p > 0 || r > 0)
            return 0.0;
        return std::pow(2.0 * I * pw->p, q) * std::exp(2.0 * I * pw->p * a);
    }
    const auto& g = std::get<GaussianPacket>(spec.v);
    const int n = p + q;
    const GaussJets ju = gauss_jets(g, spec.kappa, x - a, t, n);
    const GaussJets jw = gauss_jets(g, spec.kappa, x + a, t, n);
    const ComplexJet A = conj_jet(ju.psi);
    const ComplexJet At = conj_jet(ju.psi_t);
    // d/dx = d/du + d/dw, d/da = -d/du + d/dw for u = x - a, w = x + a
    std::vector<std::vector<double>> C(static_cast<std::size_t>(n) + 1, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
    C[0][0] = 1.0;
    auto multiply = [&](double cu) {
        std::vector<std::vector<double>> D(C.size(), std::vector<double>(C.size(), 0.0));
        for (std::size_t i = 0; i < C.size(); ++i)
            for (std::size_t k = 0; k < C.size(); ++k) {
                if (C[i][k] == 0.0)
                    continue;
                if (i + 1 < C.size())
                    D[i + 1][k] += cu * C[i][k];
                if (k + 1 < C.size())
                    D[i][k + 1] += C[i][k];
            }
        C = std::move(D);
    };
    for (int i = 0; i < p; ++i)
        multiply(1.0);
    for (int i = 0; i < q; ++i)
        multiply(-1.0);
    cplx acc = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int k = 0; i + k <= n; ++k) {
            const double c = C[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            if (c == 0.0)
                continue;
            const double w = c * factorial(i) * factorial(k);
            const auto ui = static_cast<std::size_t>(i);
            const auto wk = static_cast<std::size_t>(k);
            if (r == 0)
                acc += w * A[ui] * jw.psi[wk];
            else
                acc += w * (At[ui] * jw.psi[wk] + A[ui] * jw.psi_t[wk]);
        }
    return acc;
}

double continuity_residual(const WaveSpec& spec, double x, double t, double a, double kappa_check)
{
    const double kappa = kappa_check > 0.0 ? kappa_check : spec.kappa;
    return std::abs(density_derivative(spec, 0, 0, 1, x, t, a) - I * kappa * density_derivative(spec, 1, 1, 0, x, t, a));
}

cplx current(const WaveSpec& spec, double x, double t, double a)
{
    return I * spec.kappa * density_derivative(spec, 0, 1, 0, x, t, a);
}

cplx conserved_tensor(const WaveSpec& spec, int order, double x, double t, double a)
{
    if (order < 0 || order > 4)
        throw Error(ErrorCode::OrderTooHigh, kModule, "tensor order must be between 0 and 4");
    return density_derivative(spec, 0, order, 0, x, t, a);
}

double tensor_residual(const WaveSpec& spec, int order, double x, double t, double a)
{
    if (order < 0 || order > 4)
        throw Error(ErrorCode::OrderTooHigh, kModule, "tensor order must be between 0 and 4");
    return std::abs(density_derivative(spec, 0, order, 1, x, t, a) -
                    I * spec.kappa * density_derivative(spec, 1, order + 1, 0, x, t, a));
}

double boost_residual(const WaveSpec& spec, double x, double t, double a)
{
    const cplx ik = I * spec.kappa;
    const cplx rx = density_derivative(spec, 1, 0, 1, x, t, a) - ik * density_derivative(spec, 2, 1, 0, x, t, a);
    const cplx ra = density_derivative(spec, 0, 1, 1, x, t, a) - ik * density_derivative(spec, 1, 2, 0, x, t, a);
    return std::abs(x * rx - a * ra);
}

} // namespace mongelab
