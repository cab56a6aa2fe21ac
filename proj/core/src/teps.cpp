#include "qkinetic/oscillatory.hpp"
#include "qkinetic/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qk {

namespace {

/// log of w exp(-i xi.x0 - i k.v0 - sx^2 xi^2 / 2 - sv^2 k^2 / 2), the
/// transform of one normalized component times its weight.
cplx log_component_fourier(const DatumComponent& c, const Vec& xi, const Vec& k)
{
    cplx s = std::log(c.weight);
    for (int a = 0; a < xi.dim(); ++a)
        s += cplx(-0.5 * (c.sx[a] * c.sx[a] * xi[a] * xi[a] + c.sv[a] * c.sv[a] * k[a] * k[a]),
                  -(xi[a] * c.x0[a] + k[a] * c.v0[a]));
    return s;
}

bool next_digit(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix)
{
    for (std::size_t p = 0; p < digits.size(); ++p) {
        if (++digits[p] < radix[p])
            return true;
        digits[p] = 0;
    }
    return false;
}

void check_order(const Graph& g, const TimeLadder& times)
{
    if (times.size() != g.order())
        throw std::invalid_argument("T_eps: graph and time ladder orders differ");
    if (g.order() > 2)
        throw std::invalid_argument("T_eps: orders above 2 are not supported");
}

} // namespace

cplx T_eps_s_integrand(const Graph& g, const TimeLadder& times, const std::vector<double>& s, double eps,
                       const Vec& x1, const Vec& v1, const InitialDatum& f0, const CrossSection& cs)
{
    check_order(g, times);
    const int n = g.order();
    const int d = f0.dim();
    if (n == 0)
        return f0(x1 - times.final_time() * v1, v1);
    if (cs.is_zero())
        return 0.0;
    const auto& phi = cs.potential();
    const auto& comps = f0.components();
    IntMatrix A = interaction_matrix(g);

    EpsHistory h;
    h.graph = g;
    h.times = times;
    h.gaps = s;
    h.eps = eps;
    h.x1 = x1;
    h.v1 = v1;
    h.positions.assign(n, Vec::zero(d));
    h.velocities.assign(n, Vec::zero(d));
    h.ks.assign(n, Vec::zero(d));
    h.xis.assign(n, Vec::zero(d));
    h.sigmas.assign(n, 1);
    h.sigmas_prime.assign(n, 1);
    h.validate();

    const int m = 2 * d * n; // z = (xi_1, .., xi_n, k_1, .., k_n)
    auto log_I = [&](const std::vector<double>& z, const std::vector<std::size_t>& bump,
                     const std::vector<std::size_t>& comp) {
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < d; ++a) {
                h.xis[j][a] = z[j * d + a];
                h.ks[j][a] = z[(n + j) * d + a];
            }
        Trajectories tr = eps_trajectories(h);
        cplx log = cplx(0.0, assemble_phase(h).gamma_tilde) + f0.log_component(comp[0], tr.y(1), tr.u(1));
        for (int j = 0; j < n; ++j) {
            log += phi.log_fourier_bump(bump[2 * j], h.ks[j]);
            log += phi.log_fourier_bump(bump[2 * j + 1], h.h(j + 1));
        }
        // particle m + 2 sees (-A^T Xi, A^T S K - A^T T Xi)_m
        for (int p = 0; p < n; ++p) {
            Vec zeta = Vec::zero(d), q = Vec::zero(d);
            for (int r = 0; r < n; ++r) {
                zeta -= static_cast<double>(A[r][p]) * h.xis[r];
                q += static_cast<double>(A[r][p]) * (s[r] * h.ks[r] - times.at(r + 1) * h.xis[r]);
            }
            log += log_component_fourier(comps[comp[p + 1]], zeta, q);
        }
        return log;
    };

    cplx total = 0.0;
    std::vector<std::size_t> signs(2 * n, 0), sign_radix(2 * n, 2);
    do {
        double sign = n % 2 == 0 ? 1.0 : -1.0;
        for (int j = 0; j < n; ++j) {
            h.sigmas[j] = signs[2 * j] == 0 ? 1 : -1;
            h.sigmas_prime[j] = signs[2 * j + 1] == 0 ? 1 : -1;
            sign *= h.sigmas[j] * h.sigmas_prime[j];
        }
        std::vector<std::size_t> bump(2 * n, 0), bump_radix(2 * n, phi.bumps().size());
        do {
            std::vector<std::size_t> comp(n + 1, 0), comp_radix(n + 1, comps.size());
            do {
                ComplexQuadratic q = probe_quadratic(m, [&](const std::vector<double>& z) { return log_I(z, bump, comp); });
                total += sign * gaussian_integral(q);
            } while (next_digit(comp, comp_radix));
        } while (next_digit(bump, bump_radix));
    } while (next_digit(signs, sign_radix));
    return total / std::pow(2.0 * M_PI, 2 * d * n);
}

Estimate eval_T_eps_term(const Graph& g, const TimeLadder& times, double eps, const Vec& x1, const Vec& v1,
                         const InitialDatum& f0, const CrossSection& cs, const TepsConfig& cfg)
{
    check_order(g, times);
    if (!(eps > 0.0))
        throw std::invalid_argument("eval_T_eps_term: eps must be positive");
    const int n = g.order();
    const int d = f0.dim();
    if (n == 0)
        return {f0(x1 - times.final_time() * v1, v1), 0.0};
    if (cs.is_zero())
        return {};

    std::vector<double> upper(n);
    for (int j = 1; j <= n; ++j)
        upper[j - 1] = (times.at(j) - times.at(j + 1)) / eps;

    if (cfg.method == SMethod::quadrature) {
        auto tensor = [&](int nodes) {
            std::vector<Rule> rules;
            for (int j = 0; j < n; ++j)
                rules.push_back(composite_gauss_legendre(graded_breaks(1.0, upper[j]), nodes));
            std::vector<std::size_t> idx(n, 0), radix(n);
            for (int j = 0; j < n; ++j)
                radix[j] = rules[j].size();
            std::vector<std::vector<std::size_t>> points;
            do
                points.push_back(idx);
            while (next_digit(idx, radix));
            auto parts = run_batches<double>(points.size(), [&](std::size_t p) {
                std::vector<double> s(n);
                double w = 1.0;
                for (int j = 0; j < n; ++j) {
                    s[j] = rules[j].nodes[points[p][j]];
                    w *= rules[j].weights[points[p][j]];
                }
                return w * T_eps_s_integrand(g, times, s, eps, x1, v1, f0, cs).real();
            });
            double sum = 0.0;
            for (double v : parts)
                sum += v;
            return sum;
        };
        double fine = tensor(cfg.nodes_per_panel);
        double coarse = tensor(std::max(2, cfg.nodes_per_panel / 2));
        return {fine, std::abs(fine - coarse)};
    }

    // density proportional to (1 + s)^-d on [0, L]
    auto draw = [d](double L, double u, double& density) {
        double s;
        if (d == 1) {
            double norm = std::log1p(L);
            s = std::expm1(u * norm);
            density = 1.0 / ((1.0 + s) * norm);
        } else {
            double e = 1.0 - d;
            double norm = (1.0 - std::pow(1.0 + L, e)) / (d - 1.0);
            s = std::pow(1.0 - u * (d - 1.0) * norm, 1.0 / e) - 1.0;
            density = std::pow(1.0 + s, -d) / norm;
        }
        return std::clamp(s, 0.0, L);
    };
    return monte_carlo(cfg.budget, [&](Rng& rng) {
        std::vector<double> s(n);
        double weight = 1.0;
        for (int j = 0; j < n; ++j) {
            double density = 1.0;
            s[j] = draw(upper[j], rng.uniform(), density);
            weight /= density;
        }
        return weight * T_eps_s_integrand(g, times, s, eps, x1, v1, f0, cs).real();
    });
}

double direct_T_eps_1d(const TimeLadder& times, double eps, double x1, double v1, const InitialDatum& f0,
                       const CrossSection& cs, const DirectConfig& cfg)
{
    if (f0.dim() != 1 || times.size() != 1)
        throw std::invalid_argument("direct_T_eps_1d: needs d = 1 and n = 1");
    if (cs.is_zero())
        return 0.0;
    const double t1 = times.at(1);
    const cplx i(0.0, 1.0);
    const auto& phi = cs.potential();
    const auto& comps = f0.components();

    Rule srule = composite_gauss_legendre(graded_breaks(1.0, t1 / eps), cfg.s_nodes);
    int n_xi = 2 * static_cast<int>(std::round(cfg.xi_range / cfg.xi_step)) + 1;
    int n_k = 2 * static_cast<int>(std::round(cfg.k_range / cfg.k_step)) + 1;

    // trapezoid nodes for a = x2 - v2 t1 and v2, per component
    struct Grid {
        std::vector<double> a, v;
        double da = 0.0, dv = 0.0;
    };
    auto grid = [&](double center, double width) {
        std::vector<double> g(cfg.phase_points);
        for (int p = 0; p < cfg.phase_points; ++p)
            g[p] = center + width * cfg.phase_range * (2.0 * p / (cfg.phase_points - 1.0) - 1.0);
        return g;
    };
    auto parts = run_batches<double>(srule.size(), [&](std::size_t si) {
        double s = srule.nodes[si];
        EpsHistory h;
        h.graph = Graph({1});
        h.times = times;
        h.gaps = {s};
        h.eps = eps;
        h.x1 = Vec{x1};
        h.v1 = Vec{v1};
        h.positions = {Vec{0.0}};
        h.velocities = {Vec{0.0}};
        h.ks = {Vec{0.0}};
        h.xis = {Vec{0.0}};
        h.sigmas = {1};
        h.sigmas_prime = {1};
        double tau = t1 - eps * s;
        cplx sum = 0.0;
        for (int sg = 0; sg < 4; ++sg) {
            h.sigmas[0] = sg & 1 ? -1 : 1;
            h.sigmas_prime[0] = sg & 2 ? -1 : 1;
            double sign = -static_cast<double>(h.sigmas[0] * h.sigmas_prime[0]);
            for (int a = 0; a < n_xi; ++a) {
                double xi = -cfg.xi_range + a * cfg.xi_step;
                for (int b = 0; b < n_k; ++b) {
                    double k = -cfg.k_range + b * cfg.k_step;
                    h.xis[0][0] = xi;
                    h.ks[0][0] = k;
                    double amp = phi.fourier(Vec{k}) * phi.fourier(Vec{eps * xi - k});
                    if (amp == 0.0)
                        continue;
                    // births at x2 = v2 = 0; the true ones shift particle 2 linearly
                    Trajectories tr = eps_trajectories(h);
                    const auto& p1 = tr.particle(1);
                    const auto& p2 = tr.particle(2);
                    double y1 = tr.y(1)[0], u1 = tr.u(1)[0];
                    double y2 = tr.y(2)[0], u2 = tr.u(2)[0];
                    double sep = p1.position_at(t1)[0];
                    double drift = p1.displacement(tau, t1)[0] - p2.displacement(tau, t1)[0];
                    cplx outer = amp * std::exp(i * (xi * sep - k * drift / eps));
                    // int dx2 dv2 f0(y2 + x2 - v2 t1, u2 + v2) exp(-i xi x2 + i k s v2), with a = x2 - v2 t1
                    cplx inner = 0.0;
                    for (std::size_t c = 0; c < comps.size(); ++c) {
                        const auto& comp = comps[c];
                        double sx = comp.sx[0], sv = comp.sv[0];
                        auto ag = grid(comp.x0[0] - y2, sx), vg = grid(comp.v0[0] - u2, sv);
                        double da = ag[1] - ag[0], dv = vg[1] - vg[0];
                        cplx ia = 0.0, iv = 0.0;
                        for (double av : ag) {
                            double z = (y2 + av - comp.x0[0]) / sx;
                            ia += std::exp(-0.5 * z * z - i * xi * av);
                        }
                        for (double vv : vg) {
                            double z = (u2 + vv - comp.v0[0]) / sv;
                            iv += std::exp(-0.5 * z * z + i * (k * s - xi * t1) * vv);
                        }
                        inner += comp.weight * ia * da * iv * dv / (2.0 * M_PI * sx * sv);
                    }
                    sum += sign * outer * f0(Vec{y1}, Vec{u1}) * inner;
                }
            }
        }
        return srule.weights[si] * sum.real() * cfg.xi_step * cfg.k_step / (4.0 * M_PI * M_PI);
    });
    double total = 0.0;
    for (double p : parts)
        total += p;
    return total;
}

ConvergenceReport term_convergence_check(const Graph& g, const TimeLadder& times, const std::vector<double>& ladder,
                                         const Vec& x1, const Vec& v1, const InitialDatum& f0, const CrossSection& cs,
                                         const McBudget& limit_budget, const TepsConfig& cfg)
{
    ConvergenceReport rep;
    rep.eps = ladder;
    rep.limit = eval_T_limit(g, times, x1, v1, f0, cs, limit_budget);
    for (double e : ladder) {
        Estimate v = eval_T_eps_term(g, times, e, x1, v1, f0, cs, cfg);
        rep.values.push_back(v);
        rep.gaps.push_back(std::abs(v.value - rep.limit.value));
    }
    for (std::size_t i = 1; i < rep.gaps.size(); ++i) {
        double se = std::hypot(rep.values[i].stderr_, rep.values[i - 1].stderr_) + 2.0 * rep.limit.stderr_;
        if (rep.gaps[i] > rep.gaps[i - 1] + 2.0 * se)
            rep.decreasing = false;
    }
    if (!rep.gaps.empty()) {
        double se = std::hypot(rep.values.back().stderr_, rep.limit.stderr_);
        rep.within_tolerance = rep.gaps.back() <= 3.0 * se;
    }
    return rep;
}

} // namespace qk
