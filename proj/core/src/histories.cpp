#include "qkinetic/histories.hpp"

#include <algorithm>
#include <stdexcept>

namespace qk {

Graph::Graph(std::vector<int> labels) : labels_(std::move(labels))
{
    for (std::size_t j = 0; j < labels_.size(); ++j)
        if (labels_[j] < 1 || labels_[j] > static_cast<int>(j) + 1)
            throw std::invalid_argument("graph: label l_j must satisfy 1 <= l_j <= j");
}

std::vector<Graph> enumerate_graphs(int n)
{
    std::vector<Graph> out;
    std::vector<int> labels(n, 1);
    if (n == 0) {
        out.emplace_back();
        return out;
    }
    for (;;) {
        out.emplace_back(labels);
        int j = n - 1;
        while (j >= 0 && labels[j] == j + 1) {
            labels[j] = 1;
            --j;
        }
        if (j < 0)
            break;
        ++labels[j];
    }
    return out;
}

Graph random_graph(int n, Rng& rng)
{
    std::vector<int> labels(n);
    for (int j = 0; j < n; ++j)
        labels[j] = 1 + static_cast<int>(rng.index(j + 1));
    return Graph(labels);
}

TimeLadder::TimeLadder(double t, std::vector<double> times) : t_(t), times_(std::move(times))
{
    if (!(t > 0.0))
        throw std::invalid_argument("time ladder: final time must be positive");
    double prev = t;
    for (double s : times_) {
        if (!(s < prev) || !(s > 0.0))
            throw std::invalid_argument("time ladder: need t > t_1 > ... > t_n > 0");
        prev = s;
    }
}

double TimeLadder::at(int j) const
{
    if (j == 0)
        return t_;
    if (j == size() + 1)
        return 0.0;
    return times_.at(j - 1);
}

TimeLadder random_ladder(double t, int n, Rng& rng)
{
    for (;;) {
        std::vector<double> s(n);
        for (auto& x : s)
            x = rng.uniform(0.0, t);
        std::sort(s.begin(), s.end(), std::greater<>());
        bool ok = true;
        double prev = t;
        for (double x : s) {
            if (!(x < prev) || !(x > 0.0))
                ok = false;
            prev = x;
        }
        if (ok) // ties have probability zero; redraw if one occurs
            return TimeLadder(t, s);
    }
}

void EpsHistory::validate() const
{
    const int n = order();
    if (static_cast<int>(times.size()) != n || static_cast<int>(gaps.size()) != n ||
        static_cast<int>(sigmas.size()) != n || static_cast<int>(sigmas_prime.size()) != n ||
        static_cast<int>(ks.size()) != n || static_cast<int>(xis.size()) != n ||
        static_cast<int>(positions.size()) != n || static_cast<int>(velocities.size()) != n)
        throw std::invalid_argument("eps history: inconsistent sizes");
    for (int j = 1; j <= n; ++j) {
        double tau_j = tau(j);
        if (!(gaps[j - 1] >= 0.0) || !(tau_j > times.at(j + 1)) || !(tau_j <= times.at(j)))
            throw std::invalid_argument("eps history: tau_j must lie in (t_{j+1}, t_j]");
    }
}

EpsHistory random_eps_history(int n, int dim, double eps, Rng& rng, double t)
{
    EpsHistory h;
    h.graph = random_graph(n, rng);
    h.times = random_ladder(t, n, rng);
    h.eps = eps;
    h.x1 = rng.normal_vec(dim);
    h.v1 = rng.normal_vec(dim);
    for (int j = 1; j <= n; ++j) {
        double room = (h.times.at(j) - h.times.at(j + 1)) / eps;
        h.gaps.push_back(room * rng.uniform(0.001, 0.999));
        h.sigmas.push_back(rng.sign());
        h.sigmas_prime.push_back(rng.sign());
        h.ks.push_back(rng.normal_vec(dim));
        h.xis.push_back(rng.normal_vec(dim));
        h.positions.push_back(rng.normal_vec(dim));
        h.velocities.push_back(rng.normal_vec(dim));
    }
    return h;
}

ClassicalHistory random_classical_history(int n, int dim, Rng& rng, double t)
{
    ClassicalHistory h;
    h.graph = random_graph(n, rng);
    h.times = random_ladder(t, n, rng);
    h.x1 = rng.normal_vec(dim);
    h.v1 = rng.normal_vec(dim);
    for (int j = 0; j < n; ++j) {
        h.sigmas.push_back(rng.sign());
        h.omegas.push_back(rng.unit_vec(dim));
        h.velocities.push_back(rng.normal_vec(dim));
    }
    return h;
}

Vec ParticlePath::velocity_at(double s) const
{
    if (s >= birth_time)
        return birth_velocity;
    for (const auto& seg : segments)
        if (s >= seg.lo && s < seg.hi)
            return seg.velocity;
    return segments.empty() ? birth_velocity : segments.back().velocity;
}

Vec ParticlePath::displacement(double lo, double hi) const
{
    Vec d = Vec::zero(birth_position.dim());
    for (const auto& seg : segments) {
        double a = std::max(lo, seg.lo), b = std::min(hi, seg.hi);
        if (b > a)
            d += seg.velocity * (b - a);
    }
    return d;
}

Vec ParticlePath::position_at(double s) const
{
    return birth_position - displacement(s, birth_time);
}

PathBuilder::PathBuilder(double t, const std::vector<Vec>& x, const std::vector<Vec>& v) : now_(t)
{
    if (x.size() != v.size() || x.empty())
        throw std::invalid_argument("path builder: need matching nonempty initial states");
    for (std::size_t i = 0; i < x.size(); ++i) {
        pos_.push_back(x[i]);
        vel_.push_back(v[i]);
        open_hi_.push_back(t);
        ParticlePath p;
        p.birth_time = t;
        p.birth_position = x[i];
        p.birth_velocity = v[i];
        out_.particles.push_back(std::move(p));
    }
}

void PathBuilder::advance_to(double time)
{
    if (time > now_)
        throw std::logic_error("path builder: time must not increase");
    double dt = now_ - time;
    for (std::size_t i = 0; i < pos_.size(); ++i)
        pos_[i] -= vel_[i] * dt;
    now_ = time;
}

int PathBuilder::birth(const Vec& x, const Vec& v)
{
    pos_.push_back(x);
    vel_.push_back(v);
    open_hi_.push_back(now_);
    ParticlePath p;
    p.birth_time = now_;
    p.birth_position = x;
    p.birth_velocity = v;
    out_.particles.push_back(std::move(p));
    return static_cast<int>(pos_.size());
}

void PathBuilder::kick(int a, int b, const Vec& delta)
{
    CollisionNode node;
    node.time = now_;
    node.a = a;
    node.b = b;
    node.pre_a = vel_[a - 1];
    node.pre_b = vel_[b - 1];
    for (int i : {a, b}) {
        if (open_hi_[i - 1] > now_)
            out_.particles[i - 1].segments.push_back({now_, open_hi_[i - 1], vel_[i - 1]});
        open_hi_[i - 1] = now_;
    }
    vel_[a - 1] -= delta;
    vel_[b - 1] += delta;
    node.post_a = vel_[a - 1];
    node.post_b = vel_[b - 1];
    out_.nodes.push_back(node);
}

Trajectories PathBuilder::finish()
{
    advance_to(0.0);
    for (std::size_t i = 0; i < pos_.size(); ++i) {
        if (open_hi_[i] > 0.0)
            out_.particles[i].segments.push_back({0.0, open_hi_[i], vel_[i]});
        open_hi_[i] = 0.0;
    }
    return std::move(out_);
}

Trajectories classical_trajectories(const ClassicalHistory& h)
{
    const int n = h.graph.order();
    PathBuilder pb(h.times.final_time(), {h.x1}, {h.v1});
    for (int j = 1; j <= n; ++j) {
        pb.advance_to(h.times.at(j));
        int l = h.graph.label(j);
        int born = pb.birth(pb.position(l), h.velocities[j - 1]);
        if (h.sigmas[j - 1] == 1) {
            const Vec& w = h.omegas[j - 1];
            Vec rel = pb.velocity(l) - pb.velocity(born);
            pb.kick(l, born, dot(w, rel) * w);
        } else {
            pb.kick(l, born, Vec::zero(h.x1.dim()));
        }
    }
    return pb.finish();
}

Trajectories eps_trajectories(const EpsHistory& h)
{
    const int n = h.order();
    PathBuilder pb(h.times.final_time(), {h.x1}, {h.v1});
    for (int j = 1; j <= n; ++j) {
        int l = h.graph.label(j);
        pb.advance_to(h.times.at(j));
        int born = pb.birth(h.positions[j - 1], h.velocities[j - 1]);
        pb.kick(l, born, (0.5 * h.sigmas[j - 1]) * h.h(j));
        pb.advance_to(h.tau(j));
        pb.kick(l, born, (0.5 * h.sigmas_prime[j - 1]) * h.ks[j - 1]);
    }
    return pb.finish();
}

Trajectories bar_trajectories(const EpsHistory& h)
{
    const int n = h.order();
    PathBuilder pb(h.times.final_time(), {h.x1}, {h.v1});
    for (int j = 1; j <= n; ++j) {
        int l = h.graph.label(j);
        pb.advance_to(h.times.at(j));
        int born = pb.birth(h.positions[j - 1], h.velocities[j - 1]);
        pb.kick(l, born, (0.5 * (h.sigmas_prime[j - 1] - h.sigmas[j - 1])) * h.ks[j - 1]);
    }
    return pb.finish();
}

Trajectories substituted_bar_trajectories(const EpsHistory& h)
{
    const int n = h.order();
    PathBuilder pb(h.times.final_time(), {h.x1}, {h.v1});
    for (int j = 1; j <= n; ++j) {
        int l = h.graph.label(j);
        int sigma = h.sigmas[j - 1];
        int sigma_bar = -h.sigmas_prime[j - 1] * sigma; // from sigma' = -sigma sigmabar
        Vec eta = -static_cast<double>(sigma) * h.ks[j - 1];
        pb.advance_to(h.times.at(j));
        int born = pb.birth(h.positions[j - 1], h.velocities[j - 1]);
        pb.kick(l, born, (0.5 * (1 + sigma_bar)) * eta);
    }
    return pb.finish();
}

IntMatrix interaction_matrix(const Graph& g)
{
    const int n = g.order();
    IntMatrix a(n, std::vector<int>(n, 0));
    for (int r = 1; r <= n; ++r)
        for (int s = 1; s <= n; ++s)
            a[r - 1][s - 1] = -(r == s ? 1 : 0) + (g.label(r) == s + 1 ? 1 : 0);
    return a;
}

long long determinant(const IntMatrix& in)
{
    const int n = static_cast<int>(in.size());
    if (n == 0)
        return 1;
    std::vector<std::vector<long long>> a(n, std::vector<long long>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[i][j] = in[i][j];
    long long sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int p = k + 1;
            while (p < n && a[p][k] == 0)
                ++p;
            if (p == n)
                return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

PhaseParts phase_decomposition(const EpsHistory& h)
{
    Trajectories tr = eps_trajectories(h);
    PhaseParts out;
    for (int j = 1; j <= h.order(); ++j) {
        const ParticlePath& pl = tr.particle(h.graph.label(j));
        const ParticlePath& pn = tr.particle(j + 1);
        double tj = h.times.at(j), tau_j = h.tau(j);
        Vec du0 = pl.velocity_at(0.0) - pn.velocity_at(0.0);
        out.gamma1.push_back(pl.displacement(0.0, tj) - pn.displacement(0.0, tj) - du0 * tj);
        out.gamma2.push_back(pl.displacement(tau_j, tj) - pn.displacement(tau_j, tj) - du0 * (h.eps * h.gaps[j - 1]));
    }
    return out;
}

AssembledPhase assemble_phase(const EpsHistory& h)
{
    PhaseParts g = phase_decomposition(h);
    Trajectories tr = eps_trajectories(h);
    Vec y1 = tr.y(1), u1 = tr.u(1);
    AssembledPhase out;
    for (int j = 1; j <= h.order(); ++j) {
        const Vec& xi = h.xis[j - 1];
        const Vec& k = h.ks[j - 1];
        out.gamma += dot(g.gamma1[j - 1], xi) - dot(g.gamma2[j - 1], k) / h.eps;
    }
    out.gamma_tilde = out.gamma;
    for (int j = 1; j <= h.order(); ++j) {
        if (h.graph.label(j) != 1)
            continue;
        double tj = h.times.at(j);
        out.gamma_tilde += dot(h.xis[j - 1], y1 + tj * u1) - h.gaps[j - 1] * dot(h.ks[j - 1], u1);
    }
    return out;
}

double direct_phase(const EpsHistory& h)
{
    Trajectories tr = eps_trajectories(h);
    double phase = 0.0;
    for (int j = 1; j <= h.order(); ++j) {
        const ParticlePath& pl = tr.particle(h.graph.label(j));
        const ParticlePath& pn = tr.particle(j + 1);
        double tj = h.times.at(j), tau_j = h.tau(j);
        Vec sep = pl.position_at(tj) - pn.position_at(tj);
        Vec drift = pl.displacement(tau_j, tj) - pn.displacement(tau_j, tj);
        phase += dot(h.xis[j - 1], sep) - dot(h.ks[j - 1], drift) / h.eps;
    }
    return phase;
}

double reassembled_phase(const EpsHistory& h)
{
    Trajectories tr = eps_trajectories(h);
    IntMatrix a = interaction_matrix(h.graph);
    const int n = h.order();
    const int d = h.x1.dim();
    double phase = assemble_phase(h).gamma_tilde;
    for (int r = 1; r <= n; ++r) {
        Vec ay = Vec::zero(d), au = Vec::zero(d);
        for (int s = 1; s <= n; ++s) {
            if (a[r - 1][s - 1] == 0)
                continue;
            ay += static_cast<double>(a[r - 1][s - 1]) * tr.y(s + 1);
            au += static_cast<double>(a[r - 1][s - 1]) * tr.u(s + 1);
        }
        double tr_ = h.times.at(r), sr = h.gaps[r - 1];
        phase += dot(h.xis[r - 1], ay) + tr_ * dot(h.xis[r - 1], au) - sr * dot(h.ks[r - 1], au);
    }
    return phase;
}

} // namespace qk
