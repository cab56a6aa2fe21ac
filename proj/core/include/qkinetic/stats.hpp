#pragma once

#include <cmath>
#include <cstddef>

namespace qk {

/// A Monte Carlo (or quadrature) estimate with its standard error.
struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;

    friend Estimate operator+(Estimate a, const Estimate& b)
    {
        return {a.value + b.value, std::hypot(a.stderr_, b.stderr_)};
    }
    friend Estimate operator*(Estimate a, double s)
    {
        return {a.value * s, a.stderr_ * std::abs(s)};
    }
};

/// Welford accumulator for sample mean and variance.
class Accumulator {
public:
    void add(double x)
    {
        ++n_;
        double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    void merge(const Accumulator& o)
    {
        if (o.n_ == 0)
            return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        double n = static_cast<double>(n_ + o.n_);
        double delta = o.mean_ - mean_;
        mean_ += delta * static_cast<double>(o.n_) / n;
        m2_ += o.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
        n_ += o.n_;
    }

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double stderr_of_mean() const { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }
    Estimate estimate() const { return {mean_, stderr_of_mean()}; }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

} // namespace qk
