#include "qkinetic/quadrature.hpp"
#include "qkinetic/series.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace qk {

namespace {

/// Tensor grid on the box center + [-half, half]^d; values outside the box
/// are zero.
class VelocityGrid {
public:
    VelocityGrid(Vec center, double half, int points) : center_(center), half_(half), points_(points)
    {
        step_ = 2.0 * half / (points - 1);
        size_ = 1;
        for (int a = 0; a < center.dim(); ++a)
            size_ *= static_cast<std::size_t>(points);
    }

    std::size_t size() const { return size_; }
    int points() const { return points_; }

    Vec node(std::size_t index) const
    {
        Vec v = center_;
        for (int a = 0; a < center_.dim(); ++a) {
            v[a] += -half_ + step_ * static_cast<double>(index % points_);
            index /= points_;
        }
        return v;
    }

    /// Tensor cubic Lagrange interpolation on the 4^d surrounding nodes.
    double interpolate(const std::vector<double>& table, const Vec& v) const
    {
        const int d = center_.dim();
        int first[kMaxDim];
        double weights[kMaxDim][4];
        for (int a = 0; a < d; ++a) {
            double u = (v[a] - center_[a] + half_) / step_;
            if (!(u >= 0.0) || u > points_ - 1)
                return 0.0;
            int i = std::clamp(static_cast<int>(std::floor(u)) - 1, 0, points_ - 4);
            first[a] = i;
            for (int m = 0; m < 4; ++m) {
                double w = 1.0;
                for (int n = 0; n < 4; ++n)
                    if (n != m)
                        w *= (u - (i + n)) / static_cast<double>(m - n);
                weights[a][m] = w;
            }
        }
        double s = 0.0;
        int corners = 1 << (2 * d);
        for (int c = 0; c < corners; ++c) {
            double w = 1.0;
            std::size_t index = 0, stride = 1;
            for (int a = 0; a < d; ++a) {
                int m = (c >> (2 * a)) & 3;
                w *= weights[a][m];
                index += stride * static_cast<std::size_t>(first[a] + m);
                stride *= points_;
            }
            s += w * table[index];
        }
        return s;
    }

private:
    Vec center_;
    double half_, step_;
    int points_;
    std::size_t size_;
};

struct Reference {
    Vec center;
    double width;

    double operator()(const Vec& v) const
    {
        double r2 = norm2(v - center) / (width * width);
        return std::exp(-0.5 * r2);
    }
};

/// f(s, v) = f0(v) + ref(v) * sum_i W_i(s) table_i(v)
struct GridIterate {
    std::vector<double> nodes;
    std::vector<std::vector<double>> tables;

    std::vector<double> combined(double s) const
    {
        auto w = lagrange_integral_weights(nodes, 0.0, s);
        std::vector<double> c(tables.front().size(), 0.0);
        for (std::size_t i = 0; i < tables.size(); ++i)
            for (std::size_t k = 0; k < c.size(); ++k)
                c[k] += w[i] * tables[i][k];
        return c;
    }
};

double sample_Q(const VelocityDensity& f, const Vec& v, double fv, const CrossSection& cs,
                const VelocityProposal& proposal, Rng& rng)
{
    const int d = cs.dim();
    Vec v1 = proposal.draw(rng);
    Vec omega = rng.unit_vec(d);
    double weight = cs(omega, v - v1) * sphere_area(d) / proposal.density(v1);
    auto [vp, v1p] = collide(v, v1, omega);
    return weight * (f(vp) * f(v1p) - fv * f(v1));
}

/// Axes a along which the datum is symmetric under v_a -> 2 center_a - v_a.
/// Q preserves such reflections, so every iterate does too.
std::vector<bool> mirror_axes(const InitialDatum& f0, const Vec& center)
{
    const auto& comps = f0.components();
    std::vector<bool> mirror(f0.dim(), true);
    for (int a = 0; a < f0.dim(); ++a)
        for (const auto& c : comps) {
            Vec image = c.v0;
            image[a] = 2.0 * center[a] - image[a];
            bool found = std::any_of(comps.begin(), comps.end(), [&](const DatumComponent& o) {
                return std::abs(o.weight - c.weight) < 1e-14 && norm(o.v0 - image) < 1e-12 && norm(o.sv - c.sv) < 1e-14;
            });
            if (!found) {
                mirror[a] = false;
                break;
            }
        }
    return mirror;
}

/// canonical[k] is the representative of node k under the mirror group;
/// `unique` lists the representatives.
struct NodeOrbits {
    std::vector<std::size_t> canonical, unique;
};

NodeOrbits node_orbits(const VelocityGrid& grid, const std::vector<bool>& mirror)
{
    NodeOrbits o;
    const std::size_t g = static_cast<std::size_t>(grid.points());
    o.canonical.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::size_t rest = k, index = 0, stride = 1;
        for (std::size_t a = 0; a < mirror.size(); ++a) {
            std::size_t i = rest % g;
            rest /= g;
            if (mirror[a])
                i = std::min(i, g - 1 - i);
            index += stride * i;
            stride *= g;
        }
        o.canonical[k] = index;
        if (index == k)
            o.unique.push_back(k);
    }
    return o;
}

} // namespace

Estimate picard_oracle(const Vec& v1, double t, const InitialDatum& f0, const CrossSection& cs,
                       const PicardConfig& cfg)
{
    if (!f0.homogeneous())
        throw std::invalid_argument("picard_oracle: needs a spatially homogeneous datum");
    if (cfg.iterations < 0 || cfg.grid < 4)
        throw std::invalid_argument("picard_oracle: need iterations >= 0 and at least 4 grid points");
    auto base = [&f0](const Vec& v) { return f0.velocity_density(v); };
    if (cfg.iterations == 0 || cs.is_zero())
        return {base(v1), 0.0};

    VelocityProposal proposal = proposal_for(f0);
    Vec center = f0.mean_velocity();
    double spread = 0.0;
    for (const auto& c : f0.components())
        spread = std::max(spread, norm(c.v0 - center));
    double half = cfg.half_width > 0.0 ? cfg.half_width : 4.0 * f0.max_sv() + spread;
    VelocityGrid grid(center, half, cfg.grid);
    Reference ref{center, std::sqrt(f0.max_sv() * f0.max_sv() + spread * spread)};

    NodeOrbits orbits = node_orbits(grid, mirror_axes(f0, center));
    std::vector<double> ref_at_node(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        ref_at_node[k] = ref(grid.node(k));

    // density of the previous iterate at time s
    GridIterate previous;
    auto density_at = [&](double s) -> VelocityDensity {
        if (previous.tables.empty())
            return base;
        auto table = std::make_shared<std::vector<double>>(previous.combined(s));
        return [table, &grid, &ref, base](const Vec& v) { return base(v) + ref(v) * grid.interpolate(*table, v); };
    };

    // f_k(s, v1) is tracked separately with the large budget: the loss term
    // at v1 multiplies this value, and grid noise there would be amplified
    // by the collision frequency at every iteration.
    std::vector<double> pinned; // Q(f_{k-1}, f_{k-1})(v1) at the nodes of `previous`
    auto pinned_at = [&](double s) {
        if (pinned.empty())
            return base(v1);
        auto w = lagrange_integral_weights(previous.nodes, 0.0, s);
        double f = base(v1);
        for (std::size_t i = 0; i < w.size(); ++i)
            f += w[i] * pinned[i];
        return f;
    };
    auto q_at_v1 = [&](const VelocityDensity& f, double fv, std::uint64_t stream) {
        McBudget budget{cfg.final_samples, cfg.seed, stream};
        return monte_carlo(budget, [&](Rng& rng) { return sample_Q(f, v1, fv, cs, proposal, rng); });
    };

    for (int k = 1; k < cfg.iterations; ++k) {
        // Q(f_{k-1}, f_{k-1}) is a polynomial of degree 2^k - 2 in time
        int n_nodes = (1 << k) - 1;
        Rule times = gauss_legendre(n_nodes, 0.0, t);
        GridIterate next;
        next.nodes = times.nodes;
        std::vector<double> next_pinned;
        for (int i = 0; i < n_nodes; ++i) {
            VelocityDensity f = density_at(times.nodes[i]);
            std::uint64_t stream = (static_cast<std::uint64_t>(k) << 40) ^ (static_cast<std::uint64_t>(i) << 32);
            auto q_unique = run_batches<double>(orbits.unique.size(), [&](std::size_t u) {
                std::size_t node = orbits.unique[u];
                Rng rng(cfg.seed, stream ^ node);
                Vec v = grid.node(node);
                double fv = f(v), s = 0.0;
                for (std::size_t m = 0; m < cfg.node_samples; ++m)
                    s += sample_Q(f, v, fv, cs, proposal, rng);
                return s / static_cast<double>(cfg.node_samples) / ref_at_node[node];
            });
            std::vector<double> slot(grid.size());
            for (std::size_t u = 0; u < orbits.unique.size(); ++u)
                slot[orbits.unique[u]] = q_unique[u];
            std::vector<double> q(grid.size());
            for (std::size_t node = 0; node < grid.size(); ++node)
                q[node] = slot[orbits.canonical[node]];
            next.tables.push_back(std::move(q));
            next_pinned.push_back(q_at_v1(f, pinned_at(times.nodes[i]), stream ^ 0xffffffffULL).value);
        }
        previous = std::move(next);
        pinned = std::move(next_pinned);
    }

    // final iterate at v1: integrand of degree 2^m - 2 in time
    Rule times = gauss_legendre(1 << (cfg.iterations - 1), 0.0, t);
    Estimate integral;
    for (std::size_t i = 0; i < times.size(); ++i) {
        VelocityDensity f = density_at(times.nodes[i]);
        Estimate q = q_at_v1(f, pinned_at(times.nodes[i]), (static_cast<std::uint64_t>(cfg.iterations) << 40) ^ i);
        integral = integral + q * times.weights[i];
    }
    return Estimate{base(v1), 0.0} + integral;
}

PicardReport picard_with_errors(const Vec& v1, double t, const InitialDatum& f0, const CrossSection& cs,
                                PicardConfig cfg, int coarse_grid, int fine_grid)
{
    PicardReport rep;
    double mc2 = 0.0;
    std::uint64_t seed = cfg.seed;
    for (int s = 0; s < 2; ++s) {
        cfg.seed = seed + static_cast<std::uint64_t>(s);
        cfg.grid = coarse_grid;
        rep.coarse.push_back(picard_oracle(v1, t, f0, cs, cfg).value);
        cfg.grid = fine_grid;
        Estimate e = picard_oracle(v1, t, f0, cs, cfg);
        rep.fine.push_back(e.value);
        mc2 += e.stderr_ * e.stderr_ / 4.0;
    }
    double fine = 0.5 * (rep.fine[0] + rep.fine[1]);
    double coarse = 0.5 * (rep.coarse[0] + rep.coarse[1]);
    rep.value = fine;
    double spread = 0.5 * std::abs(rep.fine[0] - rep.fine[1]);
    rep.statistical = std::sqrt(spread * spread + mc2);
    double r = std::pow(static_cast<double>(coarse_grid - 1) / (fine_grid - 1), 2);
    rep.grid_error = std::abs(fine - coarse) * r / (1.0 - r);
    return rep;
}

} // namespace qk
