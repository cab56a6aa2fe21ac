#pragma once

#include "qkinetic/histories.hpp"
#include "qkinetic/kernel.hpp"

#include <cstdint>
#include <vector>

namespace qk {

/// Importance density for injected velocities that covers every component
/// of the datum.
VelocityProposal proposal_for(const InitialDatum& f0);

/// One Monte Carlo sample of the limiting history term: draws the injected
/// velocities and directions, sums the 2^n sign vectors exactly and returns
/// the importance-weighted integrand.
double sample_T_limit(const Graph& g, const TimeLadder& times, const Vec& x1, const Vec& v1, const InitialDatum& f0,
                      const CrossSection& cs, const VelocityProposal& proposal, Rng& rng);

/// T(t_1..t_n; l_1..l_n) at (x1, v1). For n = 0 this is the free flight
/// f0(x1 - v1 t, v1), returned with zero error.
Estimate eval_T_limit(const Graph& g, const TimeLadder& times, const Vec& x1, const Vec& v1, const InitialDatum& f0,
                      const CrossSection& cs, const McBudget& budget);

struct SeriesConfig {
    int n_max = 3;
    std::size_t budget = 100000; // samples per order
    std::uint64_t seed = 1;
    double t = 0.1;
    /// Growth constant of the term bound; <= 0 means calibrate from the
    /// measured orders.
    double c_hat = 0.0;
    bool allow_beyond_radius = false;
};

struct SeriesOrder {
    int n = 0;
    std::size_t graphs = 0;
    Estimate value;
};

struct SeriesResult {
    std::vector<SeriesOrder> orders;
    Estimate total;
    double c_hat = 0.0;
    double t0 = 0.0;         // convergence radius for c_hat
    double ratio = 0.0;      // c_hat (N1 + N2) t
    double truncation = 0.0; // geometric tail beyond n_max
    bool within_radius = true;
};

/// t0 = 1 / (C (N1 + N2)).
double convergence_radius(const Norms& norms, double c);

/// Smallest C with |F_n| <= (C (N1 + N2) t)^n for every measured order
/// n >= 1, using |F_n| + 2 stderr.
double calibrate_growth_constant(const std::vector<SeriesOrder>& orders, const Norms& norms, double t);

/// sum_{n > n_max} q^n (infinite when q >= 1).
double geometric_tail(double q, int n_max);

/// Sum of orders n = 0..n_max: every graph of order n, times sampled
/// uniformly on the simplex with volume t^n / n!.
SeriesResult boltzmann_series(const Vec& x1, const Vec& v1, const SeriesConfig& cfg, const InitialDatum& f0,
                              const CrossSection& cs);

struct PicardConfig {
    int iterations = 4;
    int grid = 21;              // points per velocity axis
    double half_width = 0.0;    // velocity box half width; <= 0 picks 4 sv + component spread
    std::size_t node_samples = 3000;
    std::size_t final_samples = 100000;
    std::uint64_t seed = 1;
};

/// m-fold Picard iterate of f(t) = f0 + int_0^t Q(f, f) for a spatially
/// homogeneous datum, evaluated at v1. Intermediate iterates live on a
/// tensor velocity grid (cubic interpolation, nodes reduced by the mirror
/// symmetries of the datum); the final one is evaluated at v1 only. The
/// stderr covers the final Monte Carlo integral only.
Estimate picard_oracle(const Vec& v1, double t, const InitialDatum& f0, const CrossSection& cs,
                       const PicardConfig& cfg);

struct PicardReport {
    double value = 0.0;          // finest grid, mean over seeds
    double statistical = 0.0;    // seed spread and final Monte Carlo error
    double grid_error = 0.0;     // Richardson estimate between the two grids
    std::vector<double> coarse, fine; // per-seed values
};

/// Runs the oracle on two grids and two seeds and estimates its error.
/// The Richardson step assumes second order in the grid step, which
/// overstates the error of the cubic interpolant.
PicardReport picard_with_errors(const Vec& v1, double t, const InitialDatum& f0, const CrossSection& cs,
                                PicardConfig cfg, int coarse_grid = 17, int fine_grid = 21);

} // namespace qk
