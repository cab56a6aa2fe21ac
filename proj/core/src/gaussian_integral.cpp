#include "qkinetic/gaussian_integral.hpp"

#include <cmath>
#include <stdexcept>

namespace qk {

cplx ComplexQuadratic::operator()(const std::vector<double>& z) const
{
    cplx e = c;
    for (int i = 0; i < dim; ++i) {
        cplx row{0.0, 0.0};
        for (int j = 0; j < dim; ++j)
            row += at(i, j) * z[j];
        e += -0.5 * z[i] * row + b[i] * z[i];
    }
    return e;
}

cplx log_gaussian_integral(const ComplexQuadratic& q)
{
    const int m = q.dim;
    if (m == 0)
        return q.c;

    // Diagonal scaling keeps the factorization well conditioned when the
    // entries span several orders of magnitude.
    std::vector<double> scale(m);
    for (int i = 0; i < m; ++i) {
        double re = q.at(i, i).real();
        if (!(re > 0.0))
            throw std::domain_error("gaussian integral: non-positive real diagonal");
        scale[i] = 1.0 / std::sqrt(std::abs(q.at(i, i)));
    }
    std::vector<cplx> a(static_cast<std::size_t>(m) * m);
    std::vector<cplx> rhs(m);
    for (int i = 0; i < m; ++i) {
        rhs[i] = q.b[i] * scale[i];
        for (int j = 0; j < m; ++j)
            a[i * m + j] = q.at(i, j) * scale[i] * scale[j];
    }

    // LDL^T without pivoting; for Re M > 0 every pivot has positive real part.
    cplx log_det{0.0, 0.0};
    for (int k = 0; k < m; ++k) {
        cplx piv = a[k * m + k];
        if (!(piv.real() > 0.0))
            throw std::domain_error("gaussian integral: real part not positive definite");
        log_det += std::log(piv);
        for (int i = k + 1; i < m; ++i) {
            cplx l = a[i * m + k] / piv;
            if (l == cplx{0.0, 0.0})
                continue;
            // column k of rows j <= i still holds the unscaled entries
            for (int j = k + 1; j <= i; ++j)
                a[i * m + j] -= l * a[j * m + k];
        }
        for (int i = k + 1; i < m; ++i)
            a[i * m + k] /= piv;
    }
    // forward solve L y = rhs
    std::vector<cplx> y = rhs;
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < i; ++k)
            y[i] -= a[i * m + k] * y[k];
    // quadratic term b^T M^{-1} b = sum y_i^2 / d_i
    cplx quad{0.0, 0.0};
    for (int i = 0; i < m; ++i)
        quad += y[i] * y[i] / a[i * m + i];

    double log_scale = 0.0;
    for (double s : scale)
        log_scale += std::log(s);
    return 0.5 * m * std::log(2.0 * M_PI) + log_scale - 0.5 * log_det + 0.5 * quad + q.c;
}

double abs_gaussian_integral(const ComplexQuadratic& q)
{
    ComplexQuadratic r(q.dim);
    for (std::size_t i = 0; i < q.M.size(); ++i)
        r.M[i] = q.M[i].real();
    for (int i = 0; i < q.dim; ++i)
        r.b[i] = q.b[i].real();
    r.c = q.c.real();
    return std::exp(log_gaussian_integral(r)).real();
}

} // namespace qk
