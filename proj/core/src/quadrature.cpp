#include "qkinetic/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace qk {

namespace {

// Legendre polynomial P_n(x) and its derivative.
std::pair<double, double> legendre(int n, double x)
{
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

} // namespace

Rule gauss_legendre(int n, double lo, double hi)
{
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: n must be positive");
    Rule r;
    double mid = 0.5 * (hi + lo);
    double half = 0.5 * (hi - lo);
    if (n == 1) {
        r.nodes = {mid};
        r.weights = {2.0 * half};
        return r;
    }
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            auto [p, dp] = legendre(n, x);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        auto [p, dp] = legendre(n, x);
        (void)p;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = mid - half * x;
        r.nodes[n - 1 - i] = mid + half * x;
        r.weights[i] = r.weights[n - 1 - i] = half * w;
    }
    return r;
}

Rule composite_gauss_legendre(const std::vector<double>& breaks, int n_per_panel)
{
    Rule out;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        if (!(breaks[p + 1] > breaks[p]))
            continue;
        Rule r = gauss_legendre(n_per_panel, breaks[p], breaks[p + 1]);
        out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
        out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
    }
    return out;
}

std::vector<double> graded_breaks(double scale, double length)
{
    std::vector<double> b{0.0};
    if (length <= 0.0)
        return b;
    double edge = scale;
    while (edge < length) {
        b.push_back(edge);
        edge *= 2.0;
    }
    b.push_back(length);
    return b;
}

Rule trapezoid(int n, double lo, double hi)
{
    if (n < 2)
        throw std::invalid_argument("trapezoid: need at least 2 points");
    Rule r;
    double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        r.nodes.push_back(lo + i * h);
        r.weights.push_back((i == 0 || i == n - 1) ? 0.5 * h : h);
    }
    return r;
}

std::vector<double> chebyshev_lobatto(int n, double lo, double hi)
{
    std::vector<double> x(n);
    if (n == 1) {
        x[0] = lo;
        return x;
    }
    for (int i = 0; i < n; ++i) {
        double c = -std::cos(M_PI * i / (n - 1));
        x[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
    }
    return x;
}

std::vector<double> lagrange_integral_weights(const std::vector<double>& nodes, double lo, double hi)
{
    const int n = static_cast<int>(nodes.size());
    std::vector<double> w(n, 0.0);
    Rule r = gauss_legendre(std::max(n, 1), lo, hi);
    for (int k = 0; k < n; ++k)
        for (std::size_t q = 0; q < r.size(); ++q) {
            double p = 1.0;
            for (int m = 0; m < n; ++m)
                if (m != k)
                    p *= (r.nodes[q] - nodes[m]) / (nodes[k] - nodes[m]);
            w[k] += r.weights[q] * p;
        }
    return w;
}

std::vector<std::vector<double>> cumulative_integration_matrix(const std::vector<double>& nodes)
{
    const int n = static_cast<int>(nodes.size());
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    if (n == 1)
        return w;
    // Gauss rule exact for the degree n-1 Lagrange basis on every subinterval.
    Rule ref = gauss_legendre(n, 0.0, 1.0);
    auto basis = [&](int k, double x) {
        double p = 1.0;
        for (int m = 0; m < n; ++m)
            if (m != k)
                p *= (x - nodes[m]) / (nodes[k] - nodes[m]);
        return p;
    };
    for (int i = 1; i < n; ++i) {
        double a = nodes[0], b = nodes[i];
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (std::size_t q = 0; q < ref.size(); ++q)
                s += ref.weights[q] * basis(k, a + (b - a) * ref.nodes[q]);
            w[i][k] = s * (b - a);
        }
    }
    return w;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n)
        throw std::invalid_argument("fit_line: need matching inputs with at least 2 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        rss += r * r;
        f.max_residual = std::max(f.max_residual, std::abs(r));
    }
    f.slope_stderr = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
    return f;
}

double extrapolate_to_zero(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> p = y;
    const std::size_t n = x.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i)
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
    return p[0];
}

} // namespace qk
