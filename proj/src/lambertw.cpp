#include "mongelab/lambertw.hpp"

#include "mongelab/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mongelab {

namespace {

constexpr double kE = 2.718281828459045;
constexpr double kSeriesRadius = 0.2 / kE;
constexpr double kBranchWindow = 1e-10;

[[noreturn]] void domain_error(double z, const char* why)
{
    std::ostringstream os;
    os.precision(17);
    os << why << " (z = " << z << ")";
    throw Error(ErrorCode::DomainError, "lambertw", os.str());
}

// W around the branch point in p = sqrt(2(1 + e z)); the lower branch takes -p.
double branch_point_expansion(double p)
{
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
}

double halley(double z, double w)
{
    for (int it = 0; it < 64; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - z;
        const double wp1 = w + 1.0;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const double step = f / denom;
        w -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w)))
            break;
    }
    return w;
}

// Newton on w + ln|w| = ln|z|, well conditioned when |w| is far from 1.
double log_newton(double z, double w)
{
    const double target = std::log(std::abs(z));
    for (int it = 0; it < 64; ++it) {
        const double f = w + std::log(std::abs(w)) - target;
        const double step = f / (1.0 + 1.0 / w);
        w -= step;
        if (std::abs(step) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(w))
            break;
    }
    return w;
}

} // namespace

double lambert_w_series(double z, int n_terms)
{
    if (n_terms < 1 || z == 0.0)
        return 0.0;
    // term_n = n^{n-1} (-z)^n / n!; ratio term_{n+1}/term_n = (-z) ((n+1)/n)^{n-1}
    double term = -z;
    double sum = term;
    for (int n = 1; n < n_terms; ++n) {
        const double r = static_cast<double>(n + 1) / static_cast<double>(n);
        term *= -z * std::pow(r, n - 1);
        sum += term;
    }
    return -sum;
}

double lambert_w(Branch branch, double z)
{
    if (std::isnan(z))
        domain_error(z, "argument is NaN");
    const double bp = lambert_branch_point;
    if (z < bp) {
        if (bp - z > 2.0 * std::numeric_limits<double>::epsilon() * std::abs(bp))
            domain_error(z, "argument below -1/e");
        z = bp;
    }
    const double q = 1.0 + kE * z;
    const double p = std::sqrt(std::max(0.0, 2.0 * q));

    if (branch == Branch::W0) {
        if (std::isinf(z))
            return z;
        if (z == 0.0)
            return 0.0;
        if (std::abs(z) <= kSeriesRadius)
            return lambert_w_series(z, 40);
        if (q <= kBranchWindow)
            return branch_point_expansion(p);
        double w;
        if (z < 0.0)
            w = branch_point_expansion(p);
        else if (z < 10.0)
            w = std::log1p(z) * (1.0 - std::log1p(std::log1p(z)) / (2.0 + std::log1p(z)));
        else
            w = std::log(z) - std::log(std::log(z));
        if (z > 1e4)
            return log_newton(z, w);
        return halley(z, w);
    }

    if (z >= 0.0)
        domain_error(z, "lower branch requires z < 0");
    if (q <= kBranchWindow)
        return branch_point_expansion(-p);
    double w;
    if (z < -0.25)
        w = branch_point_expansion(-p);
    else
        w = std::log(-z) - std::log(-std::log(-z));
    if (z > -1e-3)
        return log_newton(z, w);
    return halley(z, w);
}

} // namespace mongelab
