#pragma once

#include "qkinetic/monte_carlo.hpp"
#include "qkinetic/spectral.hpp"

#include <array>
#include <functional>
#include <utility>
#include <vector>

namespace qk {

/// Scattering cross section of a radial potential in d >= 2 dimensions:
///
///   B(omega, w) = pi / (2 pi)^d |omega.w|^(d-2) |phi_hat((omega.w) omega)|^2
///
/// which for d = 3 is |omega.w| |phi_hat|^2 / (8 pi^2).
class CrossSection {
public:
    CrossSection() = default;
    explicit CrossSection(PotentialSpec potential);
    /// Cross section of an arbitrary radial transform (used for surrogates).
    static CrossSection from_transform(int dim, std::function<double(const Vec&)> phi_hat);

    int dim() const { return dim_; }
    bool is_zero() const { return zero_; }
    const PotentialSpec& potential() const { return potential_; }

    double operator()(const Vec& omega, const Vec& w) const;
    double potential_fourier(const Vec& h) const { return phi_hat_(h); }
    /// pi / (2 pi)^d
    double prefactor() const;

private:
    int dim_ = 3;
    bool zero_ = true;
    PotentialSpec potential_;
    std::function<double(const Vec&)> phi_hat_;
};

/// Post-collisional velocities v' = v - omega(omega.w), v1' = v1 + omega(omega.w)
/// with w = v - v1. Applying it twice with the same omega is the identity.
std::pair<Vec, Vec> collide(const Vec& v, const Vec& v1, const Vec& omega);

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0; // difference to the next coarser resolution
};

/// Integral of f over the unit sphere S^{d-1} (d = 2, 3) in a frame whose
/// polar axis is `axis`, split at the equator so that integrands with a
/// kink at omega.axis = 0 are resolved.
double sphere_integral(int dim, const Vec& axis, int resolution, const std::function<double(const Vec&)>& f);

/// 1/2 int_{S^{d-1}} |omega.w|^(d-2) gamma((omega.w) omega) d omega, the
/// polar reduction of int gamma(eta) delta(eta.(w - eta)) d eta. Needs d >= 2.
QuadratureResult delta_reduce(const std::function<double(const Vec&)>& gamma, const Vec& w, int resolution = 48);

/// Volume integral int gamma(eta) delta_s(eta.(w - eta)) d eta with a Gaussian
/// mollifier of width s, in polar coordinates.
double mollified_delta_volume(const std::function<double(const Vec&)>& gamma, const Vec& w, double width,
                              int resolution = 48);

struct MollifierLadder {
    std::vector<double> widths;
    std::vector<double> values;
    double extrapolated = 0.0;
    double reference = 0.0; // delta_reduce value
    double relative_error = 0.0;
};

MollifierLadder delta_reduce_ladder(const std::function<double(const Vec&)>& gamma, const Vec& w,
                                    std::vector<double> widths = {0.2, 0.1, 0.05, 0.025});

/// Gaussian importance density for injected velocities.
struct VelocityProposal {
    Vec mean;
    double width = 1.5;

    Vec draw(Rng& rng) const;
    double density(const Vec& v) const;
};

/// Symmetric (j+1)-particle function evaluated on positions and velocities.
using ManyParticleFunction = std::function<double(const std::vector<Vec>& x, const std::vector<Vec>& v)>;

/// (C_{l,j+1} f)(X_j, V_j) = int dv_{j+1} int d omega B(omega, v_l - v_{j+1}) [f(gain) - f(loss)],
/// the new particle sitting at x_l. l is 1-based.
Estimate limiting_collision_C(const ManyParticleFunction& f, int l, const std::vector<Vec>& x, const std::vector<Vec>& v,
                              const CrossSection& cs, const VelocityProposal& proposal, const McBudget& budget);

using VelocityDensity = std::function<double(const Vec&)>;

/// Homogeneous Boltzmann collision integral Q(f, f)(v).
struct CollisionEstimate {
    Estimate q;
    Estimate gain;
    Estimate loss;
};

CollisionEstimate boltzmann_Q(const VelocityDensity& f, const Vec& v, const CrossSection& cs,
                              const VelocityProposal& proposal, const McBudget& budget);

/// int Q(f, f)(v) phi(v) dv for phi = 1, v_1..v_d, |v|^2 (d + 2 entries),
/// sampling v and v1 from the same proposal with the swap (v, v1) -> (v1, v)
/// as antithetic partner.
std::vector<Estimate> collision_moments(const VelocityDensity& f, const CrossSection& cs,
                                        const VelocityProposal& proposal, const McBudget& budget);

} // namespace qk
