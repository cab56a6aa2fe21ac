#pragma once

#include "qkinetic/gaussian_integral.hpp"
#include "qkinetic/vec.hpp"

#include <vector>

namespace qk {

/// One Gaussian bump A exp(-|x|^2 / (2 w^2)).
struct GaussianBump {
    double amplitude = 1.0;
    double width = 1.0;
};

/// Radial interaction potential given as a finite mixture of Gaussian bumps,
/// so that its Fourier transform is available in closed form.
///
/// Transform convention: phi_hat(h) = int phi(x) exp(-i h.x) dx.
class PotentialSpec {
public:
    PotentialSpec() = default;
    PotentialSpec(int dim, std::vector<GaussianBump> bumps);

    static PotentialSpec gaussian(double amplitude, double width, int dim)
    {
        return PotentialSpec(dim, {{amplitude, width}});
    }

    int dim() const { return dim_; }
    const std::vector<GaussianBump>& bumps() const { return bumps_; }
    bool is_zero() const;

    double operator()(const Vec& x) const;
    double fourier(const Vec& h) const;

    /// Log of the Fourier transform of bump b at h (complex for negative amplitudes).
    cplx log_fourier_bump(std::size_t b, const Vec& h) const;

    /// ||phi_hat||_{L^1}; exact when all amplitudes share a sign, otherwise the
    /// triangle-inequality bound.
    double fourier_l1() const;
    /// ||phi_hat||_{L^inf}; same caveat as fourier_l1.
    double fourier_sup() const;
    /// Smallest bump width (broadest bump in Fourier space).
    double min_width() const;

private:
    int dim_ = 3;
    std::vector<GaussianBump> bumps_;
};

/// Product Gaussian in (x, v) with per-axis standard deviations.
struct DatumComponent {
    double weight = 1.0;
    Vec x0, v0;
    Vec sx, sv;
};

struct Norms {
    double n1 = 0.0;
    double n2 = 0.0;
    bool exact = true; // false when only the triangle-inequality bound is available
};

/// One-particle Wigner datum f0(x, v): a nonnegative mixture of product
/// Gaussians. A homogeneous datum has no x dependence (infinite spatial
/// width); it is evaluated as a velocity density and its norms are taken in
/// velocity only.
class InitialDatum {
public:
    InitialDatum() = default;
    InitialDatum(int dim, std::vector<DatumComponent> comps, bool homogeneous = false);

    /// Unit-weight Gaussian with isotropic widths, centered at (x0, v0).
    static InitialDatum gaussian(int dim, double sx = 1.0, double sv = 1.0, Vec x0 = {}, Vec v0 = {});
    /// Spatially homogeneous velocity mixture.
    static InitialDatum homogeneous_gaussian(int dim, double sv = 1.0, Vec v0 = {});

    int dim() const { return dim_; }
    bool homogeneous() const { return homogeneous_; }
    const std::vector<DatumComponent>& components() const { return comps_; }

    double operator()(const Vec& x, const Vec& v) const;
    double velocity_density(const Vec& v) const;
    /// Log density of component c (x ignored for homogeneous data).
    double log_component(std::size_t c, const Vec& x, const Vec& v) const;

    cplx fourier(const Vec& xi, const Vec& k) const;
    /// Velocity-only transform for homogeneous data.
    cplx velocity_fourier(const Vec& k) const;

    Norms norms() const;
    bool co_centered() const;
    double total_mass() const;

    InitialDatum scaled(double alpha) const;

    /// Smallest spatial / velocity standard deviation over components and axes.
    double min_sx() const;
    double min_sv() const;
    double max_sv() const;
    /// Weighted mean velocity.
    Vec mean_velocity() const;

private:
    int dim_ = 3;
    std::vector<DatumComponent> comps_;
    bool homogeneous_ = false;
};

/// Product of datum transforms over n blocks of (xi, k).
cplx factorized_datum_fourier(const InitialDatum& f, const std::vector<Vec>& xis, const std::vector<Vec>& ks);

/// Norms by tensor Gauss-Legendre quadrature (d <= 2 only), used to
/// cross-check the closed forms.
Norms norms_by_quadrature(const InitialDatum& f, int points_per_axis = 48);

} // namespace qk
