#pragma once

// Shared vocabulary: the driving term g, initial profiles, and scalar
// function handles used by the implicit solution families.

#include "mongelab/error.hpp"
#include "mongelab/jet.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace mongelab {

/// Dense polynomial sum c_i x^i.
struct Polynomial {
    std::vector<double> c;

    double operator()(double x) const noexcept
    {
        double acc = 0.0;
        for (std::size_t k = c.size(); k-- > 0;)
            acc = acc * x + c[k];
        return acc;
    }

    template <class T>
    T eval(const T& x) const
    {
        T acc = T(0.0);
        for (std::size_t k = c.size(); k-- > 0;)
            acc = acc * x + T(c[k]);
        return acc;
    }

    Polynomial derivative() const;
    /// Antiderivative vanishing at 0.
    Polynomial antiderivative() const;
    bool is_zero() const noexcept;
};

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    double width() const noexcept { return hi - lo; }
};

/// The body force g and its pressure p(x) = p0 + int_0^x g.
struct PressureSpec {
    enum class Kind { None, Constant, LinearInX, TimeOnly, PolyX };

    Kind kind = Kind::None;
    double k = 0.0;                 // Constant: g = k; LinearInX: g = k^2 x
    std::vector<double> k_coeffs;   // TimeOnly: g = sum k_i t^i
    std::vector<double> g_coeffs;   // PolyX: g = sum g_i x^i
    double p0 = 0.0;

    static PressureSpec none(double p0 = 0.0);
    static PressureSpec constant(double k, double p0 = 0.0);
    static PressureSpec linear_in_x(double k, double p0 = 0.0);
    static PressureSpec time_only(std::vector<double> k_coeffs, double p0 = 0.0);
    static PressureSpec poly_x(std::vector<double> g_coeffs, double p0 = 0.0);

    /// g as a polynomial in x; throws UnsupportedVariant for TimeOnly.
    Polynomial g_polynomial() const;
    /// g(x, t) for any variant.
    double g(double x, double t = 0.0) const;
    bool depends_on_x() const noexcept { return kind == Kind::LinearInX || kind == Kind::PolyX; }
};

std::string kind_name(PressureSpec::Kind kind);

/// p0 + int_0^x g(z) dz. Throws UnsupportedVariant for TimeOnly.
double pressure_at(const PressureSpec& spec, double x);

struct LinearSegment {
    double alpha = 0.0;
    double beta = 0.0;
};

struct Exponential {
    double A = 1.0;
    double L = 1.0;
};

struct PiecewiseLinear {
    std::vector<std::pair<double, double>> nodes; // (x, u), x strictly increasing
};

struct ExpSegment {
    double x_begin = -std::numeric_limits<double>::infinity();
    double x_end = std::numeric_limits<double>::infinity();
    double A = 1.0;
    double L = 1.0;
};

struct PiecewiseExponential {
    std::vector<ExpSegment> segments; // contiguous, ordered
};

struct RawJet {
    Jet jet;
};

/// Initial data u(x, 0). Piecewise variants extend as constants past their
/// outermost nodes.
struct Profile {
    std::variant<LinearSegment, Exponential, PiecewiseLinear, PiecewiseExponential, RawJet> v;

    Profile() = default;
    template <class V>
        requires(!std::is_same_v<std::decay_t<V>, Profile>)
    Profile(V variant) : v(std::move(variant))
    {
        validate();
    }

    /// Throws DomainError on a malformed profile.
    void validate() const;
    std::string kind() const;
    double value(double x) const;
    double slope(double x) const;
    /// Breakpoints of piecewise profiles (empty otherwise).
    std::vector<double> nodes() const;
    /// A finite interval covering the nontrivial part of the profile.
    Interval support_hint() const;
    /// Range of u over the hint interval.
    Interval value_range() const;
};

/// Taylor coefficients of u at X up to the given order. X may itself be a
/// jet (for expansions about a moving point). Throws KinkError at a node of a
/// piecewise profile.
template <class T>
std::vector<T> profile_coeffs(const Profile& profile, const T& X, int order);

/// Taylor jet of the profile at x0.
Jet profile_jet(const Profile& profile, double x0, int order);

inline double scalar_value(double x) { return x; }
inline double scalar_value(const Jet& x) { return x.value(); }

/// Scalar function of one variable with first and second derivatives.
class FunctionHandle {
public:
    enum class Kind { Polynomial, LogForm, Zero, Tabulated, Custom };

    FunctionHandle() = default;

    static FunctionHandle zero();
    static FunctionHandle polynomial(std::vector<double> coeffs);
    /// G(u) = L ln(u / A).
    static FunctionHandle log_form(double L, double A);
    /// Piecewise-linear interpolation of strictly increasing abscissae.
    static FunctionHandle tabulated(std::vector<double> xs, std::vector<double> ys);
    /// Arbitrary callable with its derivatives; d2 may be empty.
    static FunctionHandle custom(std::function<double(double)> f, std::function<double(double)> d1,
                                 std::function<double(double)> d2 = {}, Interval domain = {});

    Kind kind() const noexcept { return kind_; }
    double operator()(double u) const { return value(u); }
    double value(double u) const;
    double d1(double u) const;
    double d2(double u) const;
    /// Where the handle is defined.
    Interval domain() const;
    bool has_analytic_d2() const noexcept { return kind_ != Kind::Custom || static_cast<bool>(d2_); }

    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    double L() const noexcept { return L_; }
    double A() const noexcept { return A_; }

private:
    Kind kind_ = Kind::Zero;
    std::vector<double> coeffs_;
    double L_ = 1.0;
    double A_ = 1.0;
    std::vector<double> xs_, ys_;
    std::function<double(double)> f_, d1_, d2_;
    Interval domain_;
};

} // namespace mongelab
