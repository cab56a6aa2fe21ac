#pragma once

#include <complex>
#include <vector>

namespace qk {

using cplx = std::complex<double>;

/// Exponent E(z) = -1/2 z^T M z + b^T z + c with complex symmetric M.
struct ComplexQuadratic {
    int dim = 0;
    std::vector<cplx> M; // row-major dim x dim
    std::vector<cplx> b;
    cplx c{0.0, 0.0};

    explicit ComplexQuadratic(int m = 0) : dim(m), M(static_cast<std::size_t>(m) * m), b(m) {}

    cplx& at(int i, int j) { return M[static_cast<std::size_t>(i) * dim + j]; }
    cplx at(int i, int j) const { return M[static_cast<std::size_t>(i) * dim + j]; }

    cplx operator()(const std::vector<double>& z) const;
};

/// Recovers the quadratic form of an exactly quadratic log-integrand by
/// evaluating it at 0, +-e_i and e_i + e_j.
template <class LogIntegrand>
ComplexQuadratic probe_quadratic(int m, LogIntegrand&& log_f)
{
    ComplexQuadratic q(m);
    std::vector<double> z(m, 0.0);
    q.c = log_f(z);
    std::vector<cplx> plus(m), minus(m);
    for (int i = 0; i < m; ++i) {
        z[i] = 1.0;
        plus[i] = log_f(z);
        z[i] = -1.0;
        minus[i] = log_f(z);
        z[i] = 0.0;
        q.b[i] = 0.5 * (plus[i] - minus[i]);
        q.at(i, i) = -(plus[i] + minus[i] - 2.0 * q.c);
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            z[i] = 1.0;
            z[j] = 1.0;
            cplx both = log_f(z);
            z[i] = 0.0;
            z[j] = 0.0;
            cplx mij = -(both - plus[i] - plus[j] + q.c);
            q.at(i, j) = mij;
            q.at(j, i) = mij;
        }
    }
    return q;
}

/// log of the integral over R^m of exp(E(z)), i.e.
/// m/2 log(2 pi) - 1/2 log det M + 1/2 b^T M^{-1} b + c,
/// with the square-root branch fixed by continuity from Re M.
/// Requires Re M positive definite; throws std::domain_error otherwise.
cplx log_gaussian_integral(const ComplexQuadratic& q);

inline cplx gaussian_integral(const ComplexQuadratic& q) { return std::exp(log_gaussian_integral(q)); }

/// Integral over R^m of exp of the real part only (used for absolute-value
/// bounds of a single Gaussian term): the real Gaussian integral of |exp(E)|.
double abs_gaussian_integral(const ComplexQuadratic& q);

} // namespace qk
