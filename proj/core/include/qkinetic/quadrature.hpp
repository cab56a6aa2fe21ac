#pragma once

#include <functional>
#include <vector>

namespace qk {

/// Nodes and weights of a one-dimensional quadrature rule.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    auto integrate(F&& f) const
    {
        decltype(f(0.0)) sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i)
            sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

/// n-point Gauss-Legendre rule on [lo, hi].
Rule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// Gauss-Legendre rule of order n on each of the panels defined by breaks.
Rule composite_gauss_legendre(const std::vector<double>& breaks, int n_per_panel);

/// Panels [0, a], [a, 2a], [2a, 4a], ... up to `length`, geometrically graded
/// away from zero. Used for gap variables that concentrate on a scale a.
std::vector<double> graded_breaks(double scale, double length);

/// Trapezoid rule with n points on [lo, hi] (spectrally accurate for smooth,
/// rapidly decaying integrands on a wide enough window).
Rule trapezoid(int n, double lo, double hi);

/// Chebyshev-Lobatto points on [lo, hi], ordered increasingly.
std::vector<double> chebyshev_lobatto(int n, double lo, double hi);

/// w_k = int_lo^hi L_k(x) dx for the Lagrange basis on `nodes`.
std::vector<double> lagrange_integral_weights(const std::vector<double>& nodes, double lo, double hi);

/// Matrix W with W[i][k] = integral from nodes[0] to nodes[i] of the k-th
/// Lagrange basis polynomial through nodes.
std::vector<std::vector<double>> cumulative_integration_matrix(const std::vector<double>& nodes);

/// Ordinary least-squares line y = intercept + slope x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double max_residual = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Polynomial extrapolation to x = 0 through the points (x_i, y_i) (Neville).
double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y);

} // namespace qk
