#pragma once

// Truncated Taylor series in (x, a) about (x0, 0): sum c_ij (x - x0)^i a^j
// with 0 <= i <= nx, 0 <= j <= na. Storage is row-major in the x power.

#include "mongelab/jet.hpp"

#include <cstddef>
#include <vector>

namespace mongelab {

template <class T>
class BasicBiJet {
public:
    BasicBiJet() = default;
    BasicBiJet(double x0, int nx, int na)
        : x0_(x0), nx_(nx), na_(na), c_(static_cast<std::size_t>(nx + 1) * static_cast<std::size_t>(na + 1), T(0))
    {}

    double x0() const noexcept { return x0_; }
    int nx() const noexcept { return nx_; }
    int na() const noexcept { return na_; }

    T& operator()(int i, int j) { return c_[index(i, j)]; }
    const T& operator()(int i, int j) const { return c_[index(i, j)]; }

    /// Zero outside the stored block.
    T get(int i, int j) const
    {
        if (i < 0 || j < 0 || i > nx_ || j > na_)
            return T(0);
        return c_[index(i, j)];
    }

    const std::vector<T>& data() const noexcept { return c_; }
    std::vector<T>& data() noexcept { return c_; }

    /// Coefficients of a^j as a jet in x.
    BasicJet<T> layer(int j) const
    {
        std::vector<T> v(static_cast<std::size_t>(nx_) + 1);
        for (int i = 0; i <= nx_; ++i)
            v[static_cast<std::size_t>(i)] = (*this)(i, j);
        return BasicJet<T>(x0_, std::move(v), nx_);
    }

    /// Same coefficients restricted to a smaller block.
    BasicBiJet truncated(int nx, int na) const
    {
        BasicBiJet out(x0_, nx < nx_ ? nx : nx_, na < na_ ? na : na_);
        for (int i = 0; i <= out.nx_; ++i)
            for (int j = 0; j <= out.na_; ++j)
                out(i, j) = (*this)(i, j);
        return out;
    }

    BasicBiJet& operator+=(const BasicBiJet& o)
    {
        for (int i = 0; i <= nx_; ++i)
            for (int j = 0; j <= na_; ++j)
                (*this)(i, j) += o.get(i, j);
        return *this;
    }

    BasicBiJet& operator-=(const BasicBiJet& o)
    {
        for (int i = 0; i <= nx_; ++i)
            for (int j = 0; j <= na_; ++j)
                (*this)(i, j) -= o.get(i, j);
        return *this;
    }

    BasicBiJet& operator*=(double s)
    {
        for (auto& v : c_)
            v *= s;
        return *this;
    }

    friend BasicBiJet operator+(BasicBiJet a, const BasicBiJet& b) { return a += b; }
    friend BasicBiJet operator-(BasicBiJet a, const BasicBiJet& b) { return a -= b; }
    friend BasicBiJet operator*(double s, BasicBiJet a) { return a *= s; }

private:
    std::size_t index(int i, int j) const noexcept
    {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(na_ + 1) + static_cast<std::size_t>(j);
    }

    double x0_ = 0.0;
    int nx_ = 0;
    int na_ = 0;
    std::vector<T> c_{T(0)};
};

using BiJet = BasicBiJet<double>;

} // namespace mongelab
