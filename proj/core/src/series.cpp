#include "qkinetic/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qk {

VelocityProposal proposal_for(const InitialDatum& f0)
{
    Vec mean = f0.mean_velocity();
    double spread = 0.0;
    for (const auto& c : f0.components())
        spread = std::max(spread, norm(c.v0 - mean));
    return {mean, 1.3 * (f0.max_sv() + spread / std::sqrt(static_cast<double>(f0.dim())))};
}

double sample_T_limit(const Graph& g, const TimeLadder& times, const Vec& x1, const Vec& v1, const InitialDatum& f0,
                      const CrossSection& cs, const VelocityProposal& proposal, Rng& rng)
{
    const int n = g.order();
    const int d = f0.dim();
    ClassicalHistory h;
    h.graph = g;
    h.times = times;
    h.x1 = x1;
    h.v1 = v1;
    double weight = 1.0;
    for (int j = 0; j < n; ++j) {
        Vec v = proposal.draw(rng);
        weight *= sphere_area(d) / proposal.density(v);
        h.velocities.push_back(v);
        h.omegas.push_back(rng.unit_vec(d));
    }
    h.sigmas.assign(n, 1);
    double sum = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        for (int j = 0; j < n; ++j)
            h.sigmas[j] = (mask >> j) & 1u ? -1 : 1;
        Trajectories tr = classical_trajectories(h);
        double kernel = 1.0;
        for (int j = 0; j < n && kernel != 0.0; ++j) {
            const auto& node = tr.nodes[j];
            kernel *= h.sigmas[j] * cs(h.omegas[j], node.pre_a - node.pre_b);
        }
        if (kernel == 0.0)
            continue;
        double f = 1.0;
        for (int j = 1; j <= tr.count(); ++j)
            f *= f0(tr.y(j), tr.u(j));
        sum += kernel * f;
    }
    return weight * sum;
}

Estimate eval_T_limit(const Graph& g, const TimeLadder& times, const Vec& x1, const Vec& v1, const InitialDatum& f0,
                      const CrossSection& cs, const McBudget& budget)
{
    if (times.size() != g.order())
        throw std::invalid_argument("eval_T_limit: graph and time ladder orders differ");
    if (g.order() == 0)
        return {f0(x1 - times.final_time() * v1, v1), 0.0};
    if (cs.is_zero())
        return {};
    VelocityProposal proposal = proposal_for(f0);
    return monte_carlo(budget, [&](Rng& rng) { return sample_T_limit(g, times, x1, v1, f0, cs, proposal, rng); });
}

double convergence_radius(const Norms& norms, double c)
{
    if (!(c > 0.0))
        throw std::invalid_argument("convergence_radius: C must be positive");
    return 1.0 / (c * (norms.n1 + norms.n2));
}

double calibrate_growth_constant(const std::vector<SeriesOrder>& orders, const Norms& norms, double t)
{
    double c = 0.0;
    for (const auto& o : orders) {
        if (o.n < 1)
            continue;
        double mag = std::abs(o.value.value) + 2.0 * o.value.stderr_;
        c = std::max(c, std::pow(mag, 1.0 / o.n) / ((norms.n1 + norms.n2) * t));
    }
    return c;
}

double geometric_tail(double q, int n_max)
{
    if (q >= 1.0)
        return std::numeric_limits<double>::infinity();
    return std::pow(q, n_max + 1) / (1.0 - q);
}

SeriesResult boltzmann_series(const Vec& x1, const Vec& v1, const SeriesConfig& cfg, const InitialDatum& f0,
                              const CrossSection& cs)
{
    if (cfg.n_max < 0 || !(cfg.t > 0.0))
        throw std::invalid_argument("boltzmann_series: need n_max >= 0 and t > 0");
    Norms norms = f0.norms();
    if (cfg.c_hat > 0.0 && cfg.t >= convergence_radius(norms, cfg.c_hat) && !cfg.allow_beyond_radius)
        throw std::invalid_argument("boltzmann_series: t is not below the convergence radius");

    VelocityProposal proposal = proposal_for(f0);
    SeriesResult out;
    double volume = 1.0;
    for (int n = 0; n <= cfg.n_max; ++n) {
        if (n > 0)
            volume *= cfg.t / n;
        auto graphs = enumerate_graphs(n);
        SeriesOrder order{n, graphs.size(), {}};
        if (n == 0) {
            order.value = {f0(x1 - cfg.t * v1, v1), 0.0};
        } else if (!cs.is_zero()) {
            McBudget budget{cfg.budget, cfg.seed, static_cast<std::uint64_t>(n)};
            order.value = monte_carlo(budget, [&](Rng& rng) {
                TimeLadder times = random_ladder(cfg.t, n, rng);
                double s = 0.0;
                for (const auto& g : graphs)
                    s += sample_T_limit(g, times, x1, v1, f0, cs, proposal, rng);
                return s;
            }) * volume;
        }
        out.total = out.total + order.value;
        out.orders.push_back(order);
    }
    out.c_hat = cfg.c_hat > 0.0 ? cfg.c_hat : calibrate_growth_constant(out.orders, norms, cfg.t);
    if (out.c_hat > 0.0) {
        out.t0 = convergence_radius(norms, out.c_hat);
        out.ratio = out.c_hat * (norms.n1 + norms.n2) * cfg.t;
        out.truncation = geometric_tail(out.ratio, cfg.n_max);
    } else {
        out.t0 = std::numeric_limits<double>::infinity();
    }
    out.within_radius = out.ratio < 1.0;
    return out;
}

} // namespace qk
