#include "qkinetic/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qk {

namespace {

Vec or_zero(const Vec& c, int dim)
{
    return c.dim() == 0 ? Vec::zero(dim) : c;
}

/// int_R exp(-p z^2 / 2 + b z + c) dz
cplx gauss_axis(cplx p, cplx b, cplx c)
{
    return std::sqrt(2.0 * M_PI / p) * std::exp(b * b / (2.0 * p) + c);
}

} // namespace

double GaussianFactor::sup() const
{
    return std::abs(amplitude);
}

double GaussianFactor::l1(int dim) const
{
    return std::abs(amplitude) * std::pow(2.0 * M_PI * width * width, 0.5 * dim);
}

double GaussianFactor::fourier_sup(int dim) const
{
    return l1(dim);
}

double GaussianFactor::fourier_l1(int dim) const
{
    return std::abs(amplitude) * std::pow(2.0 * M_PI, dim);
}

ModelChi ModelChi::standard(int dim)
{
    GaussianFactor g{1.0, Vec::zero(dim), 1.0};
    return {dim, g, g, g, g};
}

cplx model_A_integrand(const ModelChi& chi, double s)
{
    const int d = chi.dim;
    const cplx i(0.0, 1.0);
    Vec cx = or_zero(chi.gx.center, d), cy = or_zero(chi.gy.center, d);
    Vec cxi = or_zero(chi.gxi.center, d), ceta = or_zero(chi.geta.center, d);
    double wx2 = chi.gx.width * chi.gx.width, wy2 = chi.gy.width * chi.gy.width;
    double wxi2 = chi.gxi.width * chi.gxi.width, weta2 = chi.geta.width * chi.geta.width;

    // g_x_hat(-xi) g_xi(xi), with g_hat(q) = a (2 pi w^2)^{d/2} exp(-i q.c - w^2 q^2 / 2)
    cplx x1 = chi.gx.amplitude * chi.gxi.amplitude * std::pow(2.0 * M_PI * wx2, 0.5 * d);
    // g_y_hat(s eta) g_eta(eta)
    cplx k2 = chi.gy.amplitude * chi.geta.amplitude * std::pow(2.0 * M_PI * wy2, 0.5 * d);
    for (int a = 0; a < d; ++a) {
        x1 *= gauss_axis(wx2 + 1.0 / wxi2, i * cx[a] + cxi[a] / wxi2, -cxi[a] * cxi[a] / (2.0 * wxi2));
        k2 *= gauss_axis(wy2 * s * s + 1.0 / weta2, -i * s * cy[a] + ceta[a] / weta2, -ceta[a] * ceta[a] / (2.0 * weta2));
    }
    return x1 * k2;
}

namespace {

cplx integrate(const Rule& r, const std::function<cplx(double)>& f)
{
    cplx s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        s += r.weights[i] * f(r.nodes[i]);
    return s;
}

double model_scale(const ModelChi& chi)
{
    // s at which g_y_hat(s eta) starts to cut off the eta integral
    return 1.0 / (chi.gy.width * chi.geta.width);
}

} // namespace

cplx model_A_eps(const ModelChi& chi, double eps)
{
    if (!(eps > 0.0))
        throw std::invalid_argument("model_A_eps: eps must be positive");
    Rule r = composite_gauss_legendre(graded_breaks(0.5 * model_scale(chi), 1.0 / eps), 16);
    return integrate(r, [&](double s) { return model_A_integrand(chi, s); });
}

cplx model_A_limit(const ModelChi& chi)
{
    if (chi.dim < 2)
        throw std::domain_error("model_A_limit: the s-integral diverges in one dimension");
    double split = 64.0 * model_scale(chi);
    Rule head = composite_gauss_legendre(graded_breaks(0.5 * model_scale(chi), split), 16);
    // tail s = split / u, u in (0, 1]; the integrand is O(u^{d-2})
    Rule tail = composite_gauss_legendre({0.0, 0.125, 0.25, 0.5, 1.0}, 16);
    cplx a = integrate(head, [&](double s) { return model_A_integrand(chi, s); });
    cplx b = integrate(tail, [&](double u) { return model_A_integrand(chi, split / u) * split / (u * u); });
    return a + b;
}

double model_A_bound(const ModelChi& chi, double eps)
{
    const int d = chi.dim;
    double na = chi.gx.fourier_sup(d) * chi.gy.fourier_sup(d) * chi.gxi.l1(d) * chi.geta.l1(d);
    double nb = chi.gx.fourier_l1(d) * chi.gy.fourier_l1(d) * chi.gxi.sup() * chi.geta.sup();
    double top = 1.0 / eps;
    double bound = na * std::min(1.0, top);
    if (top > 1.0)
        bound += nb * (d == 1 ? std::log(top) : (1.0 - std::pow(top, 1.0 - d)) / (d - 1.0));
    return bound;
}

// ---------------------------------------------------------------------------

DeltaCheckReport mollified_delta_check(const std::vector<double>& T_ladder, double a_max)
{
    auto g = [](double a) { return std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI); };
    auto odd = [](double a) { return a * std::exp(-0.5 * a * a); };
    auto dirichlet = [a_max](double T, const std::function<double(double)>& f) {
        // about four Gauss panels per period of sin(T a)
        int panels = std::max(64, static_cast<int>(std::ceil(4.0 * T * a_max / M_PI)));
        std::vector<double> breaks(panels + 1);
        for (int p = 0; p <= panels; ++p)
            breaks[p] = -a_max + 2.0 * a_max * p / panels;
        Rule r = composite_gauss_legendre(breaks, 8);
        double s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            double a = r.nodes[i];
            double kernel = std::abs(T * a) < 1e-8 ? T : std::sin(T * a) / a;
            s += r.weights[i] * kernel * f(a);
        }
        return s;
    };

    DeltaCheckReport rep;
    double target = M_PI * g(0.0);
    for (double T : T_ladder) {
        DeltaCheckRow row;
        row.T = T;
        row.value = dirichlet(T, g);
        // int_0^T g_hat(tau) d tau with g_hat(tau) = exp(-tau^2 / 2)
        row.fourier = std::sqrt(M_PI / 2.0) * std::erf(T / std::sqrt(2.0));
        row.relative_error = std::abs(row.value - target) / target;
        rep.rows.push_back(row);
    }
    if (!T_ladder.empty())
        rep.odd_value = dirichlet(*std::max_element(T_ladder.begin(), T_ladder.end()), odd);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        double prev = rep.rows[i - 1].relative_error, cur = rep.rows[i].relative_error;
        if (cur > 0.5 * prev && cur > 1e-12)
            rep.halving = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------

double g_integral(const Graph& g, const TimeLadder& times, const std::vector<double>& s, const InitialDatum& f0,
                  const CrossSection& cs)
{
    const int n = g.order();
    const int d = f0.dim();
    if (static_cast<int>(s.size()) != n || times.size() != n)
        throw std::invalid_argument("g_integral: graph, times and gaps must have the same order");
    if (f0.homogeneous())
        throw std::invalid_argument("g_integral: needs a spatially localized datum");
    if (cs.is_zero())
        return 0.0;
    if (n == 0)
        return 0.0;

    IntMatrix A = interaction_matrix(g);
    const auto& bumps = cs.potential().bumps();
    const auto& comps = f0.components();

    // every choice of one bump per k_j and one datum component per particle 2..n+1
    std::vector<std::size_t> bump_pick(n, 0), comp_pick(n, 0);
    double total = 0.0;
    for (;;) {
        double scale = 1.0;
        for (int j = 0; j < n; ++j) {
            const auto& b = bumps[bump_pick[j]];
            scale *= std::abs(b.amplitude) * std::pow(2.0 * M_PI * b.width * b.width, 0.5 * d);
            scale *= comps[comp_pick[j]].weight;
        }
        // axes decouple; variables per axis z = (Xi_1..Xi_n, K_1..K_n)
        for (int axis = 0; axis < d; ++axis) {
            ComplexQuadratic q(2 * n);
            auto add = [&](const std::vector<double>& row, double precision) {
                for (int p = 0; p < 2 * n; ++p)
                    for (int r = 0; r < 2 * n; ++r)
                        q.at(p, r) += precision * row[p] * row[r];
            };
            for (int j = 0; j < n; ++j) {
                double wb = bumps[bump_pick[j]].width;
                std::vector<double> kj(2 * n, 0.0);
                kj[n + j] = 1.0;
                add(kj, wb * wb);
            }
            // particle m + 2: xi' = -(A^T Xi)_m, q = (A^T S K - A^T T Xi)_m
            for (int m = 0; m < n; ++m) {
                const auto& c = comps[comp_pick[m]];
                std::vector<double> xi_row(2 * n, 0.0), k_row(2 * n, 0.0);
                for (int r = 0; r < n; ++r) {
                    xi_row[r] = -A[r][m];
                    k_row[n + r] = A[r][m] * s[r];
                    k_row[r] = -A[r][m] * times.at(r + 1);
                }
                add(xi_row, c.sx[axis] * c.sx[axis]);
                add(k_row, c.sv[axis] * c.sv[axis]);
            }
            scale *= abs_gaussian_integral(q);
        }
        total += scale;

        int pos = 0;
        for (; pos < n; ++pos) {
            if (++comp_pick[pos] < comps.size())
                break;
            comp_pick[pos] = 0;
            if (++bump_pick[pos] < bumps.size())
                break;
            bump_pick[pos] = 0;
        }
        if (pos == n)
            break;
    }
    return total;
}

UniformBoundReport uniform_bound_check(const Graph& g, const TimeLadder& times,
                                       const std::vector<std::vector<double>>& s_points, const InitialDatum& f0,
                                       const CrossSection& cs)
{
    const int n = g.order();
    const int d = f0.dim();
    Norms norms = f0.norms();
    UniformBoundReport rep;
    rep.s_points = s_points;
    const auto& phi = cs.potential();
    rep.constant = std::pow(2.0, d) * std::max(phi.fourier_l1(), phi.fourier_sup());
    rep.envelope = std::pow(rep.constant * (norms.n1 + norms.n2), n);
    std::vector<double> lx, ly;
    for (const auto& s : s_points) {
        double v = g_integral(g, times, s, f0, cs);
        double weight = 1.0;
        for (double sj : s)
            weight *= std::pow(1.0 + sj, d);
        rep.integrals.push_back(v);
        rep.scaled.push_back(v * weight);
        if (n > 0)
            rep.observed_constant =
                std::max(rep.observed_constant, std::pow(v * weight, 1.0 / n) / (norms.n1 + norms.n2));
        if (v * weight > rep.envelope * (1.0 + 1e-12))
            rep.ok = false;
        if (n == 1 && v > 0.0) {
            lx.push_back(std::log(1.0 + s[0]));
            ly.push_back(std::log(v));
        }
    }
    if (lx.size() >= 2)
        rep.decay_slope = fit_line(lx, ly).slope;
    return rep;
}

} // namespace qk
