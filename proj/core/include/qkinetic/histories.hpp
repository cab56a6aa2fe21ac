#pragma once

#include "qkinetic/rng.hpp"
#include "qkinetic/vec.hpp"

#include <vector>

namespace qk {

/// Collision partner labels l_1..l_n with 1 <= l_j <= j (1-based particle indices).
class Graph {
public:
    Graph() = default;
    explicit Graph(std::vector<int> labels);

    int order() const { return static_cast<int>(labels_.size()); }
    int label(int j) const { return labels_[j - 1]; } // j is 1-based
    const std::vector<int>& labels() const { return labels_; }

    friend bool operator==(const Graph& a, const Graph& b) { return a.labels_ == b.labels_; }

private:
    std::vector<int> labels_;
};

/// All graphs of order n (there are n! of them), in lexicographic order.
std::vector<Graph> enumerate_graphs(int n);
Graph random_graph(int n, Rng& rng);

/// Final time t and collision times t > t_1 > ... > t_n > 0.
class TimeLadder {
public:
    TimeLadder() = default;
    TimeLadder(double t, std::vector<double> times);

    double final_time() const { return t_; }
    int size() const { return static_cast<int>(times_.size()); }
    /// t_j with the conventions t_0 = t and t_{n+1} = 0.
    double at(int j) const;
    const std::vector<double>& times() const { return times_; }

private:
    double t_ = 1.0;
    std::vector<double> times_;
};

/// n sorted uniform times on (0, t).
TimeLadder random_ladder(double t, int n, Rng& rng);

struct ClassicalHistory {
    Graph graph;
    TimeLadder times;
    std::vector<int> sigmas;
    std::vector<Vec> omegas;
    Vec x1, v1;
    std::vector<Vec> velocities; // injected v_2..v_{n+1}
};

struct EpsHistory {
    Graph graph;
    TimeLadder times;
    std::vector<double> gaps; // s_j, with tau_j = t_j - eps s_j
    std::vector<int> sigmas, sigmas_prime;
    std::vector<Vec> ks, xis;
    double eps = 0.1;
    Vec x1, v1;
    std::vector<Vec> positions;  // injected x_2..x_{n+1}
    std::vector<Vec> velocities; // injected v_2..v_{n+1}

    int order() const { return graph.order(); }
    double tau(int j) const { return times.at(j) - eps * gaps[j - 1]; }
    /// h_j = -k_j + eps xi_j
    Vec h(int j) const { return -ks[j - 1] + eps * xis[j - 1]; }
    /// Throws std::invalid_argument unless tau_j lies in (t_{j+1}, t_j).
    void validate() const;
};

/// Random history with uniform times, admissible gaps and Gaussian momenta.
EpsHistory random_eps_history(int n, int dim, double eps, Rng& rng, double t = 1.0);
ClassicalHistory random_classical_history(int n, int dim, Rng& rng, double t = 1.0);

/// Velocity u on [lo, hi); positions follow by integration.
struct Segment {
    double lo = 0.0, hi = 0.0;
    Vec velocity;
};

/// Backward trajectory of one particle, born at birth_time at birth_position.
/// Velocities are right-continuous: at a node time the value of the segment
/// above it is returned.
struct ParticlePath {
    double birth_time = 0.0;
    Vec birth_position;
    Vec birth_velocity;
    std::vector<Segment> segments; // descending in time, covering [0, birth_time)

    Vec velocity_at(double s) const;
    /// y(s) = x - int_s^{birth} u
    Vec position_at(double s) const;
    /// int_lo^hi u(r) dr for 0 <= lo <= hi <= birth_time
    Vec displacement(double lo, double hi) const;
};

/// Velocities of a colliding pair just above and just below a node.
struct CollisionNode {
    double time = 0.0;
    int a = 0, b = 0; // 1-based particle indices
    Vec pre_a, pre_b, post_a, post_b;
};

struct Trajectories {
    std::vector<ParticlePath> particles;
    std::vector<CollisionNode> nodes;

    const ParticlePath& particle(int j) const { return particles[j - 1]; }
    Vec y(int j) const { return particle(j).position_at(0.0); }
    Vec u(int j) const { return particle(j).velocity_at(0.0); }
    int count() const { return static_cast<int>(particles.size()); }
};

/// Incremental backward-in-time construction of piecewise free trajectories.
class PathBuilder {
public:
    PathBuilder(double t, const std::vector<Vec>& x, const std::vector<Vec>& v);

    double now() const { return now_; }
    /// Free flight of all living particles down to `time` (<= now).
    void advance_to(double time);
    /// New particle at the current time; returns its 1-based index.
    int birth(const Vec& x, const Vec& v);
    /// u_a -= delta, u_b += delta for times below now.
    void kick(int a, int b, const Vec& delta);

    Vec position(int i) const { return pos_[i - 1]; }
    Vec velocity(int i) const { return vel_[i - 1]; }
    int count() const { return static_cast<int>(pos_.size()); }

    Trajectories finish();

private:
    double now_;
    std::vector<Vec> pos_, vel_;
    std::vector<double> open_hi_;
    Trajectories out_;
};

Trajectories classical_trajectories(const ClassicalHistory& h);
Trajectories eps_trajectories(const EpsHistory& h);
/// The eps = 0 system: one kick (sigma' - sigma)/2 k_j at t_j.
Trajectories bar_trajectories(const EpsHistory& h);
/// The recursion after the substitution eta_j = -sigma_j k_j, sigma'_j = -sigma_j sigmabar_j:
/// one kick (1 + sigmabar_j)/2 eta_j at t_j.
Trajectories substituted_bar_trajectories(const EpsHistory& h);

using IntMatrix = std::vector<std::vector<int>>;

/// A_{r,s} = -delta_{r,s} + delta_{l_r, s+1}, r, s = 1..n.
IntMatrix interaction_matrix(const Graph& g);
/// Exact integer determinant (fraction-free elimination).
long long determinant(const IntMatrix& a);

struct PhaseParts {
    std::vector<Vec> gamma1, gamma2;
};

/// Remainders of the pair separations after removing the free flight from
/// the endpoint states.
PhaseParts phase_decomposition(const EpsHistory& h);

struct AssembledPhase {
    double gamma = 0.0;
    double gamma_tilde = 0.0;
};

AssembledPhase assemble_phase(const EpsHistory& h);

/// sum_j xi_j.(y_l(t_j) - y_{j+1}(t_j)) - (k_j / eps).[(y_l - y_{j+1})(t_j) - (y_l - y_{j+1})(tau_j)]
double direct_phase(const EpsHistory& h);

/// Gamma_tilde + (Xi, A Y) + (T Xi, A U) - (S K, A U), built from the endpoint states.
double reassembled_phase(const EpsHistory& h);

} // namespace qk
