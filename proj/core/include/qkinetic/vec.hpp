#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace qk {

/// Maximum spatial dimension supported by the fixed-capacity vector type.
inline constexpr int kMaxDim = 3;

/// Small fixed-capacity vector in R^d, 1 <= d <= kMaxDim.
///
/// Used for positions, velocities, wavevectors and directions. The dimension
/// travels with the value so mismatched arithmetic is caught in debug builds.
class Vec {
public:
    Vec() = default;

    explicit Vec(int dim) : dim_(dim)
    {
        if (dim < 1 || dim > kMaxDim)
            throw std::invalid_argument("Vec: dimension must be in [1, 3]");
    }

    Vec(std::initializer_list<double> values) : Vec(static_cast<int>(values.size()))
    {
        int i = 0;
        for (double v : values)
            c_[i++] = v;
    }

    static Vec zero(int dim) { return Vec(dim); }

    static Vec from(const std::vector<double>& values)
    {
        Vec v(static_cast<int>(values.size()));
        for (int i = 0; i < v.dim_; ++i)
            v.c_[i] = values[i];
        return v;
    }

    int dim() const { return dim_; }

    double& operator[](int i) { return c_[i]; }
    double operator[](int i) const { return c_[i]; }

    std::vector<double> to_vector() const { return {c_.begin(), c_.begin() + dim_}; }

    Vec& operator+=(const Vec& o)
    {
        assert(o.dim_ == dim_);
        for (int i = 0; i < dim_; ++i)
            c_[i] += o.c_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o)
    {
        assert(o.dim_ == dim_);
        for (int i = 0; i < dim_; ++i)
            c_[i] -= o.c_[i];
        return *this;
    }
    Vec& operator*=(double s)
    {
        for (int i = 0; i < dim_; ++i)
            c_[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator-(Vec a) { return a *= -1.0; }

    friend bool operator==(const Vec& a, const Vec& b)
    {
        if (a.dim_ != b.dim_)
            return false;
        for (int i = 0; i < a.dim_; ++i)
            if (a.c_[i] != b.c_[i])
                return false;
        return true;
    }

private:
    std::array<double, kMaxDim> c_{};
    int dim_ = 0;
};

inline double dot(const Vec& a, const Vec& b)
{
    assert(a.dim() == b.dim());
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

/// Surface area of the unit sphere S^{d-1}; for d = 1 this is the counting
/// measure of {-1, +1}.
inline double sphere_area(int dim)
{
    switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: throw std::invalid_argument("sphere_area: unsupported dimension");
    }
}

} // namespace qk
