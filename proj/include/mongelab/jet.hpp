#pragma once

// Truncated Taylor series in one variable. A jet of order N at x0 stands for
// the class of functions agreeing with sum_i c_i (x - x0)^i up to (x - x0)^N.
// Coefficients past the stored length are zero. Plain numbers convert to
// constant jets of unbounded order, so mixed expressions truncate to the
// lowest finite order involved.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <type_traits>
#include <vector>

namespace mongelab {

template <class T>
class BasicJet {
public:
    using value_type = T;
    static constexpr int unbounded = std::numeric_limits<int>::max() / 4;

    BasicJet() = default;
    BasicJet(T value) : c_{value} {}
    BasicJet(double x0, std::vector<T> coeffs, int order = -1)
        : x0_(x0), order_(order < 0 ? static_cast<int>(coeffs.size()) - 1 : order), c_(std::move(coeffs))
    {
        if (order_ < 0)
            order_ = 0;
        trim();
    }
    BasicJet(double x0, std::initializer_list<T> coeffs) : BasicJet(x0, std::vector<T>(coeffs)) {}

    /// The identity function x at x0.
    static BasicJet variable(double x0, int order)
    {
        std::vector<T> c{T(x0)};
        if (order >= 1)
            c.push_back(T(1));
        return BasicJet(x0, std::move(c), order);
    }

    static BasicJet zero(double x0, int order) { return BasicJet(x0, {}, order); }

    double x0() const noexcept { return x0_; }
    int order() const noexcept { return order_; }
    bool is_constant() const noexcept { return order_ >= unbounded; }
    std::size_t size() const noexcept { return c_.size(); }
    const std::vector<T>& coeffs() const noexcept { return c_; }

    T operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : T(0); }
    T value() const noexcept { return (*this)[0]; }

    void set(std::size_t i, T v)
    {
        if (static_cast<int>(i) > order_)
            return;
        if (i >= c_.size())
            c_.resize(i + 1, T(0));
        c_[i] = v;
    }

    /// Dense coefficient vector of length order+1 (finite order only).
    std::vector<T> dense() const
    {
        std::vector<T> out(static_cast<std::size_t>(order_) + 1, T(0));
        std::copy(c_.begin(), c_.end(), out.begin());
        return out;
    }

    template <class X>
    auto eval(X x) const
    {
        using R = decltype(T(0) * x);
        R acc = R(0);
        const X dx = x - X(x0_);
        for (std::size_t k = c_.size(); k-- > 0;)
            acc = acc * dx + R(c_[k]);
        return acc;
    }

    /// i-th derivative at x0.
    T derivative_at(std::size_t i) const
    {
        T v = (*this)[i];
        for (std::size_t k = 2; k <= i; ++k)
            v *= static_cast<double>(k);
        return v;
    }

    BasicJet derivative() const
    {
        if (is_constant())
            return BasicJet(T(0));
        std::vector<T> d;
        for (std::size_t i = 1; i < c_.size(); ++i)
            d.push_back(c_[i] * static_cast<double>(i));
        return BasicJet(x0_, std::move(d), std::max(order_ - 1, 0));
    }

    BasicJet integrate(T constant = T(0)) const
    {
        std::vector<T> d(c_.size() + 1, T(0));
        d[0] = constant;
        for (std::size_t i = 0; i < c_.size(); ++i)
            d[i + 1] = c_[i] / static_cast<double>(i + 1);
        return BasicJet(x0_, std::move(d), is_constant() ? unbounded : order_ + 1);
    }

    /// Re-expand the truncated polynomial about a new centre. Exact on the
    /// polynomial; the order is kept.
    BasicJet shift(double new_x0) const
    {
        if (is_constant())
            return *this;
        const double h = new_x0 - x0_;
        std::vector<T> d = c_;
        const std::size_t n = d.size();
        for (std::size_t k = 0; k + 1 < n; ++k)
            for (std::size_t j = n - 1; j > k; --j)
                d[j - 1] += d[j] * h;
        return BasicJet(new_x0, std::move(d), order_);
    }

    /// Coefficients of y -> u(x0 + s*y), re-centred at 0 in y but reported at x0.
    BasicJet rescale(T s) const
    {
        std::vector<T> d = c_;
        T p = T(1);
        for (auto& v : d) {
            v *= p;
            p *= s;
        }
        return BasicJet(x0_, std::move(d), order_);
    }

    BasicJet truncated(int order) const
    {
        BasicJet out = *this;
        out.order_ = std::min(order_, order);
        out.trim();
        return out;
    }

    BasicJet operator-() const
    {
        BasicJet out = *this;
        for (auto& v : out.c_)
            v = -v;
        return out;
    }

    BasicJet& operator+=(const BasicJet& o) { return *this = *this + o; }
    BasicJet& operator-=(const BasicJet& o) { return *this = *this - o; }
    BasicJet& operator*=(const BasicJet& o) { return *this = *this * o; }
    BasicJet& operator/=(const BasicJet& o) { return *this = *this / o; }

    friend BasicJet operator+(const BasicJet& a, const BasicJet& b)
    {
        BasicJet out(common_x0(a, b), {}, std::min(a.order_, b.order_));
        const std::size_t n = std::max(a.c_.size(), b.c_.size());
        out.c_.assign(n, T(0));
        for (std::size_t i = 0; i < n; ++i)
            out.c_[i] = a[i] + b[i];
        out.trim();
        return out;
    }

    friend BasicJet operator-(const BasicJet& a, const BasicJet& b) { return a + (-b); }

    friend BasicJet operator*(const BasicJet& a, const BasicJet& b)
    {
        BasicJet out(common_x0(a, b), {}, std::min(a.order_, b.order_));
        if (a.c_.empty() || b.c_.empty())
            return out;
        const std::size_t cap = static_cast<std::size_t>(out.order_) + 1;
        const std::size_t n = std::min(cap, a.c_.size() + b.c_.size() - 1);
        out.c_.assign(n, T(0));
        for (std::size_t i = 0; i < a.c_.size() && i < n; ++i)
            for (std::size_t j = 0; j < b.c_.size() && i + j < n; ++j)
                out.c_[i + j] += a.c_[i] * b.c_[j];
        out.trim();
        return out;
    }

    friend BasicJet operator/(const BasicJet& a, const BasicJet& b) { return a * reciprocal(b); }

    friend BasicJet reciprocal(const BasicJet& b)
    {
        if (b.is_constant())
            return BasicJet(T(1) / b.value());
        const std::size_t n = static_cast<std::size_t>(b.order_) + 1;
        std::vector<T> r(n, T(0));
        const T b0 = b[0];
        r[0] = T(1) / b0;
        for (std::size_t k = 1; k < n; ++k) {
            T s = T(0);
            for (std::size_t j = 1; j <= k && j < b.c_.size(); ++j)
                s += b.c_[j] * r[k - j];
            r[k] = -s / b0;
        }
        return BasicJet(b.x0_, std::move(r), b.order_);
    }

    friend BasicJet exp(const BasicJet& a)
    {
        if (a.is_constant())
            return BasicJet(std::exp(a.value()));
        const std::size_t n = static_cast<std::size_t>(a.order_) + 1;
        std::vector<T> e(n, T(0));
        e[0] = std::exp(a[0]);
        for (std::size_t k = 1; k < n; ++k) {
            T s = T(0);
            for (std::size_t j = 1; j <= k && j < a.c_.size(); ++j)
                s += static_cast<double>(j) * a.c_[j] * e[k - j];
            e[k] = s / static_cast<double>(k);
        }
        return BasicJet(a.x0_, std::move(e), a.order_);
    }

    friend BasicJet log(const BasicJet& a)
    {
        if (a.is_constant())
            return BasicJet(std::log(a.value()));
        const std::size_t n = static_cast<std::size_t>(a.order_) + 1;
        std::vector<T> l(n, T(0));
        const T a0 = a[0];
        l[0] = std::log(a0);
        for (std::size_t k = 1; k < n; ++k) {
            T s = T(0);
            for (std::size_t j = 1; j < k; ++j)
                s += static_cast<double>(j) * l[j] * a[k - j];
            l[k] = (a[k] - s / static_cast<double>(k)) / a0;
        }
        return BasicJet(a.x0_, std::move(l), a.order_);
    }

    friend BasicJet sqrt(const BasicJet& a)
    {
        if (a.is_constant())
            return BasicJet(std::sqrt(a.value()));
        const std::size_t n = static_cast<std::size_t>(a.order_) + 1;
        std::vector<T> r(n, T(0));
        r[0] = std::sqrt(a[0]);
        for (std::size_t k = 1; k < n; ++k) {
            T s = T(0);
            for (std::size_t j = 1; j < k; ++j)
                s += r[j] * r[k - j];
            r[k] = (a[k] - s) / (2.0 * r[0]);
        }
        return BasicJet(a.x0_, std::move(r), a.order_);
    }

    /// sin and cos together; they share one recurrence.
    friend void sincos(const BasicJet& a, BasicJet& s_out, BasicJet& c_out)
    {
        if (a.is_constant()) {
            s_out = BasicJet(std::sin(a.value()));
            c_out = BasicJet(std::cos(a.value()));
            return;
        }
        const std::size_t n = static_cast<std::size_t>(a.order_) + 1;
        std::vector<T> s(n, T(0)), c(n, T(0));
        s[0] = std::sin(a[0]);
        c[0] = std::cos(a[0]);
        for (std::size_t k = 1; k < n; ++k) {
            T ss = T(0), cc = T(0);
            for (std::size_t j = 1; j <= k && j < a.c_.size(); ++j) {
                const T w = static_cast<double>(j) * a.c_[j];
                ss += w * c[k - j];
                cc += w * s[k - j];
            }
            s[k] = ss / static_cast<double>(k);
            c[k] = -cc / static_cast<double>(k);
        }
        s_out = BasicJet(a.x0_, std::move(s), a.order_);
        c_out = BasicJet(a.x0_, std::move(c), a.order_);
    }

    friend BasicJet sin(const BasicJet& a)
    {
        BasicJet s, c;
        sincos(a, s, c);
        return s;
    }

    friend BasicJet cos(const BasicJet& a)
    {
        BasicJet s, c;
        sincos(a, s, c);
        return c;
    }

    friend BasicJet tan(const BasicJet& a)
    {
        BasicJet s, c;
        sincos(a, s, c);
        return s / c;
    }

    /// Integer power by repeated multiplication.
    friend BasicJet pow(const BasicJet& a, int n)
    {
        BasicJet out(T(1));
        BasicJet base = a;
        bool invert = n < 0;
        unsigned m = static_cast<unsigned>(invert ? -n : n);
        while (m) {
            if (m & 1u)
                out = out * base;
            base = base * base;
            m >>= 1u;
        }
        return invert ? reciprocal(out) : out;
    }

private:
    static double common_x0(const BasicJet& a, const BasicJet& b) noexcept
    {
        return a.is_constant() ? b.x0_ : a.x0_;
    }

    void trim()
    {
        if (!is_constant() && c_.size() > static_cast<std::size_t>(order_) + 1)
            c_.resize(static_cast<std::size_t>(order_) + 1);
        if (is_constant() && c_.size() > 1)
            c_.resize(1);
        // Drop trailing exact zeros.
        if constexpr (std::is_floating_point_v<T>)
            while (!c_.empty() && c_.back() == T(0))
                c_.pop_back();
    }

    double x0_ = 0.0;
    int order_ = unbounded;
    std::vector<T> c_;
};

template <class T>
BasicJet<T> operator+(const BasicJet<T>& a, T b) { return a + BasicJet<T>(b); }
template <class T>
BasicJet<T> operator+(T a, const BasicJet<T>& b) { return BasicJet<T>(a) + b; }
template <class T>
BasicJet<T> operator-(const BasicJet<T>& a, T b) { return a - BasicJet<T>(b); }
template <class T>
BasicJet<T> operator-(T a, const BasicJet<T>& b) { return BasicJet<T>(a) - b; }
template <class T>
BasicJet<T> operator*(const BasicJet<T>& a, T b) { return a * BasicJet<T>(b); }
template <class T>
BasicJet<T> operator*(T a, const BasicJet<T>& b) { return BasicJet<T>(a) * b; }
template <class T>
BasicJet<T> operator/(const BasicJet<T>& a, T b) { return a * BasicJet<T>(T(1) / b); }
template <class T>
BasicJet<T> operator/(T a, const BasicJet<T>& b) { return BasicJet<T>(a) / b; }

using Jet = BasicJet<double>;
using ComplexJet = BasicJet<std::complex<double>>;

} // namespace mongelab
