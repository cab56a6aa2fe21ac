#include "qkinetic/kernel.hpp"

#include "qkinetic/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qk {

CrossSection::CrossSection(PotentialSpec potential)
    : dim_(potential.dim()), zero_(potential.is_zero()), potential_(potential),
      phi_hat_([p = std::move(potential)](const Vec& h) { return p.fourier(h); })
{
}

CrossSection CrossSection::from_transform(int dim, std::function<double(const Vec&)> phi_hat)
{
    CrossSection cs;
    cs.dim_ = dim;
    cs.zero_ = false;
    cs.potential_ = PotentialSpec(dim, {});
    cs.phi_hat_ = std::move(phi_hat);
    return cs;
}

double CrossSection::prefactor() const { return M_PI / std::pow(2.0 * M_PI, dim_); }

double CrossSection::operator()(const Vec& omega, const Vec& w) const
{
    if (dim_ < 2)
        throw std::domain_error("cross_section: defined for d >= 2 only");
    if (zero_)
        return 0.0;
    double a = dot(omega, w);
    double ph = phi_hat_(a * omega);
    double radial = dim_ == 2 ? 1.0 : std::pow(std::abs(a), dim_ - 2);
    return prefactor() * radial * ph * ph;
}

std::pair<Vec, Vec> collide(const Vec& v, const Vec& v1, const Vec& omega)
{
    Vec kick = dot(omega, v - v1) * omega;
    return {v - kick, v1 + kick};
}

namespace {

/// Orthonormal frame with first vector along `axis` (or e_1 if axis = 0).
std::array<Vec, 3> frame(int dim, const Vec& axis)
{
    Vec e1 = Vec::zero(dim);
    double n = norm(axis);
    if (n > 0.0)
        e1 = axis * (1.0 / n);
    else
        e1[0] = 1.0;
    Vec e2 = Vec::zero(dim), e3 = Vec::zero(dim);
    if (dim == 2) {
        e2[0] = -e1[1];
        e2[1] = e1[0];
    } else if (dim == 3) {
        // pick the coordinate axis least aligned with e1
        int m = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(e1[i]) < std::abs(e1[m]))
                m = i;
        Vec t = Vec::zero(3);
        t[m] = 1.0;
        e2 = t - dot(t, e1) * e1;
        e2 = e2 * (1.0 / norm(e2));
        e3 = Vec{e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]};
    }
    return {e1, e2, e3};
}

double gaussian_mollifier(double z, double width)
{
    double u = z / width;
    return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * M_PI) * width);
}

} // namespace

double sphere_integral(int dim, const Vec& axis, int resolution, const std::function<double(const Vec&)>& f)
{
    auto [e1, e2, e3] = frame(dim, axis);
    if (dim == 2) {
        Rule r = composite_gauss_legendre({0.0, 0.5 * M_PI, M_PI, 1.5 * M_PI, 2.0 * M_PI}, resolution);
        return r.integrate([&](double th) { return f(std::cos(th) * e1 + std::sin(th) * e2); });
    }
    if (dim == 3) {
        Rule theta = composite_gauss_legendre({0.0, 0.5 * M_PI, M_PI}, resolution);
        int n_phi = 2 * resolution;
        double dphi = 2.0 * M_PI / n_phi;
        double s = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            double ct = std::cos(theta.nodes[i]), st = std::sin(theta.nodes[i]);
            double ring = 0.0;
            for (int k = 0; k < n_phi; ++k) {
                double ph = k * dphi;
                ring += f(ct * e1 + st * (std::cos(ph) * e2 + std::sin(ph) * e3));
            }
            s += theta.weights[i] * st * ring * dphi;
        }
        return s;
    }
    throw std::invalid_argument("sphere_integral: d must be 2 or 3");
}

QuadratureResult delta_reduce(const std::function<double(const Vec&)>& gamma, const Vec& w, int resolution)
{
    const int d = w.dim();
    if (d < 2)
        throw std::domain_error("delta_reduce: the polar reduction misses the eta = 0 root in d = 1");
    auto integrand = [&](const Vec& omega) {
        double a = dot(omega, w);
        double radial = d == 2 ? 1.0 : std::pow(std::abs(a), d - 2);
        return 0.5 * radial * gamma(a * omega);
    };
    double fine = sphere_integral(d, w, resolution, integrand);
    double coarse = sphere_integral(d, w, std::max(2, resolution / 2), integrand);
    return {fine, std::abs(fine - coarse)};
}

double mollified_delta_volume(const std::function<double(const Vec&)>& gamma, const Vec& w, double width,
                              int resolution)
{
    const int d = w.dim();
    auto radial_integral = [&](const Vec& omega) {
        double a = dot(omega, w);
        double h = std::min(width / std::max(std::abs(a), 1e-300), std::sqrt(width));
        std::vector<double> breaks{0.0};
        std::vector<double> roots{0.0};
        if (a > 0.0)
            roots.push_back(a);
        for (double r0 : roots)
            for (double c = 0.25; c <= 64.0; c *= 2.0) {
                breaks.push_back(r0 + c * h);
                if (r0 - c * h > 0.0)
                    breaks.push_back(r0 - c * h);
            }
        breaks.push_back(std::max(a, 0.0) + 64.0 * h + 1.0);
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        Rule r = composite_gauss_legendre(breaks, 10);
        return r.integrate([&](double rr) {
            return std::pow(rr, d - 1) * gamma(rr * omega) * gaussian_mollifier(rr * (a - rr), width);
        });
    };
    if (d == 1)
        return radial_integral(Vec{1.0}) + radial_integral(Vec{-1.0});
    return sphere_integral(d, w, resolution, radial_integral);
}

MollifierLadder delta_reduce_ladder(const std::function<double(const Vec&)>& gamma, const Vec& w,
                                    std::vector<double> widths)
{
    MollifierLadder out;
    out.widths = std::move(widths);
    for (double s : out.widths)
        out.values.push_back(mollified_delta_volume(gamma, w, s));
    // the mollified integral is even in the width; the coarse widths are not
    // yet asymptotic, so extrapolate in s^2 through the two finest only
    std::size_t first = out.widths.size() >= 2 ? out.widths.size() - 2 : 0;
    std::vector<double> s2, vals;
    for (std::size_t i = first; i < out.widths.size(); ++i) {
        s2.push_back(out.widths[i] * out.widths[i]);
        vals.push_back(out.values[i]);
    }
    out.extrapolated = extrapolate_to_zero(s2, vals);
    out.reference = delta_reduce(gamma, w).value;
    out.relative_error = std::abs(out.extrapolated - out.reference) / std::max(std::abs(out.reference), 1e-300);
    return out;
}

Vec VelocityProposal::draw(Rng& rng) const { return mean + width * rng.normal_vec(mean.dim()); }

double VelocityProposal::density(const Vec& v) const
{
    const int d = mean.dim();
    double r2 = norm2(v - mean) / (width * width);
    return std::exp(-0.5 * r2) / std::pow(std::sqrt(2.0 * M_PI) * width, d);
}

Estimate limiting_collision_C(const ManyParticleFunction& f, int l, const std::vector<Vec>& x, const std::vector<Vec>& v,
                              const CrossSection& cs, const VelocityProposal& proposal, const McBudget& budget)
{
    const int j = static_cast<int>(x.size());
    if (l < 1 || l > j || v.size() != x.size())
        throw std::invalid_argument("limiting_collision_C: need 1 <= l <= j and matching state sizes");
    if (cs.is_zero())
        return {};
    const int d = cs.dim();
    return monte_carlo(budget, [&](Rng& rng) {
        Vec v_new = proposal.draw(rng);
        Vec omega = rng.unit_vec(d);
        double weight = cs(omega, v[l - 1] - v_new) * sphere_area(d) / proposal.density(v_new);
        if (weight == 0.0)
            return 0.0;
        std::vector<Vec> xs = x, vs = v;
        xs.push_back(x[l - 1]);
        vs.push_back(v_new);
        double loss = f(xs, vs);
        auto [va, vb] = collide(v[l - 1], v_new, omega);
        vs[l - 1] = va;
        vs.back() = vb;
        return weight * (f(xs, vs) - loss);
    });
}

CollisionEstimate boltzmann_Q(const VelocityDensity& f, const Vec& v, const CrossSection& cs,
                              const VelocityProposal& proposal, const McBudget& budget)
{
    if (cs.is_zero())
        return {};
    const int d = cs.dim();
    double fv = f(v);
    auto est = monte_carlo_multi(budget, 3, [&](Rng& rng, std::vector<double>& out) {
        Vec v1 = proposal.draw(rng);
        Vec omega = rng.unit_vec(d);
        double weight = cs(omega, v - v1) * sphere_area(d) / proposal.density(v1);
        auto [vp, v1p] = collide(v, v1, omega);
        double gain = weight * f(vp) * f(v1p);
        double loss = weight * fv * f(v1);
        out[0] = gain - loss;
        out[1] = gain;
        out[2] = loss;
    });
    return {est[0], est[1], est[2]};
}

std::vector<Estimate> collision_moments(const VelocityDensity& f, const CrossSection& cs,
                                        const VelocityProposal& proposal, const McBudget& budget)
{
    const int d = cs.dim();
    const std::size_t width = static_cast<std::size_t>(d) + 2;
    return monte_carlo_multi(budget, width, [&](Rng& rng, std::vector<double>& out) {
        Vec v = proposal.draw(rng), v1 = proposal.draw(rng);
        Vec omega = rng.unit_vec(d);
        double weight = cs(omega, v - v1) * sphere_area(d) / (proposal.density(v) * proposal.density(v1));
        auto [vp, v1p] = collide(v, v1, omega);
        // the swapped sample (v1, v) has the same weight and the same collision kernel value
        double g = weight * (f(vp) * f(v1p) - f(v) * f(v1));
        out[0] = g;
        for (int a = 0; a < d; ++a)
            out[1 + a] = 0.5 * g * (v[a] + v1[a]);
        out[d + 1] = 0.5 * g * (norm2(v) + norm2(v1));
    });
}

} // namespace qk
