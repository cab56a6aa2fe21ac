#include "qkinetic/spectral.hpp"

#include "qkinetic/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qk {

PotentialSpec::PotentialSpec(int dim, std::vector<GaussianBump> bumps) : dim_(dim), bumps_(std::move(bumps))
{
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("potential: dimension must be in [1, 3]");
    for (const auto& b : bumps_)
        if (!(b.width > 0.0))
            throw std::invalid_argument("potential: widths must be positive");
}

bool PotentialSpec::is_zero() const
{
    return std::all_of(bumps_.begin(), bumps_.end(), [](const GaussianBump& b) { return b.amplitude == 0.0; });
}

double PotentialSpec::operator()(const Vec& x) const
{
    double r2 = norm2(x), s = 0.0;
    for (const auto& b : bumps_)
        s += b.amplitude * std::exp(-r2 / (2.0 * b.width * b.width));
    return s;
}

double PotentialSpec::fourier(const Vec& h) const
{
    double k2 = norm2(h), s = 0.0;
    for (const auto& b : bumps_) {
        double w2 = b.width * b.width;
        s += b.amplitude * std::pow(2.0 * M_PI * w2, 0.5 * dim_) * std::exp(-0.5 * w2 * k2);
    }
    return s;
}

cplx PotentialSpec::log_fourier_bump(std::size_t i, const Vec& h) const
{
    const auto& b = bumps_[i];
    double w2 = b.width * b.width;
    cplx amp = b.amplitude * std::pow(2.0 * M_PI * w2, 0.5 * dim_);
    return std::log(amp) - 0.5 * w2 * norm2(h);
}

double PotentialSpec::fourier_l1() const
{
    // int phi_hat_b = (2 pi)^d A_b for a single bump
    double s = 0.0;
    for (const auto& b : bumps_)
        s += std::abs(b.amplitude);
    return std::pow(2.0 * M_PI, dim_) * s;
}

double PotentialSpec::fourier_sup() const
{
    double s = 0.0;
    for (const auto& b : bumps_)
        s += std::abs(b.amplitude) * std::pow(2.0 * M_PI * b.width * b.width, 0.5 * dim_);
    return s;
}

double PotentialSpec::min_width() const
{
    double w = std::numeric_limits<double>::infinity();
    for (const auto& b : bumps_)
        w = std::min(w, b.width);
    return w;
}

InitialDatum::InitialDatum(int dim, std::vector<DatumComponent> comps, bool homogeneous)
    : dim_(dim), comps_(std::move(comps)), homogeneous_(homogeneous)
{
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("datum: dimension must be in [1, 3]");
    if (comps_.empty())
        throw std::invalid_argument("datum: needs at least one component");
    for (auto& c : comps_) {
        if (c.weight < 0.0)
            throw std::invalid_argument("datum: weights must be nonnegative");
        if (c.x0.dim() == 0)
            c.x0 = Vec::zero(dim);
        if (c.v0.dim() == 0)
            c.v0 = Vec::zero(dim);
        if (c.sx.dim() == 0) {
            c.sx = Vec(dim);
            for (int a = 0; a < dim; ++a)
                c.sx[a] = 1.0;
        }
        if (c.sv.dim() == 0) {
            c.sv = Vec(dim);
            for (int a = 0; a < dim; ++a)
                c.sv[a] = 1.0;
        }
        if (c.x0.dim() != dim || c.v0.dim() != dim || c.sx.dim() != dim || c.sv.dim() != dim)
            throw std::invalid_argument("datum: component dimension mismatch");
        for (int a = 0; a < dim; ++a)
            if (!(c.sv[a] > 0.0) || (!homogeneous_ && !(c.sx[a] > 0.0)))
                throw std::invalid_argument("datum: widths must be positive");
    }
}

InitialDatum InitialDatum::gaussian(int dim, double sx, double sv, Vec x0, Vec v0)
{
    DatumComponent c;
    c.x0 = x0.dim() ? x0 : Vec::zero(dim);
    c.v0 = v0.dim() ? v0 : Vec::zero(dim);
    c.sx = Vec(dim);
    c.sv = Vec(dim);
    for (int a = 0; a < dim; ++a) {
        c.sx[a] = sx;
        c.sv[a] = sv;
    }
    return InitialDatum(dim, {c});
}

InitialDatum InitialDatum::homogeneous_gaussian(int dim, double sv, Vec v0)
{
    InitialDatum f = gaussian(dim, 1.0, sv, {}, v0);
    f.homogeneous_ = true;
    return f;
}

double InitialDatum::log_component(std::size_t i, const Vec& x, const Vec& v) const
{
    const auto& c = comps_[i];
    double s = std::log(c.weight);
    for (int a = 0; a < dim_; ++a) {
        double dv = (v[a] - c.v0[a]) / c.sv[a];
        s += -0.5 * dv * dv - std::log(std::sqrt(2.0 * M_PI) * c.sv[a]);
        if (!homogeneous_) {
            double dx = (x[a] - c.x0[a]) / c.sx[a];
            s += -0.5 * dx * dx - std::log(std::sqrt(2.0 * M_PI) * c.sx[a]);
        }
    }
    return s;
}

double InitialDatum::operator()(const Vec& x, const Vec& v) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < comps_.size(); ++i)
        if (comps_[i].weight > 0.0)
            s += std::exp(log_component(i, x, v));
    return s;
}

double InitialDatum::velocity_density(const Vec& v) const
{
    double s = 0.0;
    for (const auto& c : comps_) {
        double e = c.weight;
        for (int a = 0; a < dim_; ++a) {
            double dv = (v[a] - c.v0[a]) / c.sv[a];
            e *= std::exp(-0.5 * dv * dv) / (std::sqrt(2.0 * M_PI) * c.sv[a]);
        }
        s += e;
    }
    return s;
}

cplx InitialDatum::fourier(const Vec& xi, const Vec& k) const
{
    if (homogeneous_)
        throw std::logic_error("datum_fourier: homogeneous datum has a singular spatial transform");
    cplx s{0.0, 0.0};
    for (const auto& c : comps_) {
        double q = 0.0, phase = 0.0;
        for (int a = 0; a < dim_; ++a) {
            q += c.sx[a] * c.sx[a] * xi[a] * xi[a] + c.sv[a] * c.sv[a] * k[a] * k[a];
            phase += xi[a] * c.x0[a] + k[a] * c.v0[a];
        }
        s += c.weight * std::exp(-0.5 * q) * cplx(std::cos(phase), -std::sin(phase));
    }
    return s;
}

cplx InitialDatum::velocity_fourier(const Vec& k) const
{
    cplx s{0.0, 0.0};
    for (const auto& c : comps_) {
        double q = 0.0, phase = 0.0;
        for (int a = 0; a < dim_; ++a) {
            q += c.sv[a] * c.sv[a] * k[a] * k[a];
            phase += k[a] * c.v0[a];
        }
        s += c.weight * std::exp(-0.5 * q) * cplx(std::cos(phase), -std::sin(phase));
    }
    return s;
}

bool InitialDatum::co_centered() const
{
    for (const auto& c : comps_)
        if (!(c.x0 == comps_.front().x0) || !(c.v0 == comps_.front().v0))
            return false;
    return true;
}

double InitialDatum::total_mass() const
{
    double m = 0.0;
    for (const auto& c : comps_)
        m += c.weight;
    return m;
}

Norms InitialDatum::norms() const
{
    // Per component: int |f_hat| = w prod 2 pi / (sx sv), int sup_k |f_hat| = w prod sqrt(2 pi) / sx.
    // Co-centered mixtures share one phase, so the sums are exact; otherwise
    // the sums bound the norms from above.
    Norms n;
    n.exact = co_centered();
    for (const auto& c : comps_) {
        double a = c.weight, b = c.weight;
        for (int i = 0; i < dim_; ++i) {
            if (homogeneous_) {
                a *= std::sqrt(2.0 * M_PI) / c.sv[i];
            } else {
                a *= 2.0 * M_PI / (c.sx[i] * c.sv[i]);
                b *= std::sqrt(2.0 * M_PI) / c.sx[i];
            }
        }
        n.n1 += a;
        n.n2 += homogeneous_ ? 0.0 : b;
    }
    if (homogeneous_)
        n.n2 = total_mass();
    return n;
}

InitialDatum InitialDatum::scaled(double alpha) const
{
    InitialDatum f = *this;
    for (auto& c : f.comps_)
        c.weight *= alpha;
    return f;
}

double InitialDatum::min_sx() const
{
    double s = std::numeric_limits<double>::infinity();
    for (const auto& c : comps_)
        for (int a = 0; a < dim_; ++a)
            s = std::min(s, c.sx[a]);
    return s;
}

double InitialDatum::min_sv() const
{
    double s = std::numeric_limits<double>::infinity();
    for (const auto& c : comps_)
        for (int a = 0; a < dim_; ++a)
            s = std::min(s, c.sv[a]);
    return s;
}

double InitialDatum::max_sv() const
{
    double s = 0.0;
    for (const auto& c : comps_)
        for (int a = 0; a < dim_; ++a)
            s = std::max(s, c.sv[a]);
    return s;
}

Vec InitialDatum::mean_velocity() const
{
    Vec m = Vec::zero(dim_);
    double total = total_mass();
    for (const auto& c : comps_)
        m += c.v0 * (c.weight / total);
    return m;
}

cplx factorized_datum_fourier(const InitialDatum& f, const std::vector<Vec>& xis, const std::vector<Vec>& ks)
{
    if (xis.size() != ks.size() || xis.empty())
        throw std::invalid_argument("factorized_datum_fourier: need n >= 1 matching blocks");
    cplx p{1.0, 0.0};
    for (std::size_t i = 0; i < xis.size(); ++i)
        p *= f.fourier(xis[i], ks[i]);
    return p;
}

Norms norms_by_quadrature(const InitialDatum& f, int points)
{
    const int d = f.dim();
    if (d > 2 || f.homogeneous())
        throw std::invalid_argument("norms_by_quadrature: only for inhomogeneous data with d <= 2");
    double xi_max = 9.0 / f.min_sx();
    double k_max = 9.0 / f.min_sv();
    Rule rx = gauss_legendre(points, -xi_max, xi_max);
    Rule rk = gauss_legendre(points, -k_max, k_max);

    auto for_each = [&](const Rule& r, auto&& body) {
        if (d == 1) {
            for (std::size_t i = 0; i < r.size(); ++i)
                body(Vec{r.nodes[i]}, r.weights[i]);
        } else {
            for (std::size_t i = 0; i < r.size(); ++i)
                for (std::size_t j = 0; j < r.size(); ++j)
                    body(Vec{r.nodes[i], r.nodes[j]}, r.weights[i] * r.weights[j]);
        }
    };

    Norms n;
    n.exact = false;
    for_each(rx, [&](const Vec& xi, double wx) {
        double sup = std::abs(f.fourier(xi, Vec::zero(d)));
        double inner = 0.0;
        for_each(rk, [&](const Vec& k, double wk) {
            double a = std::abs(f.fourier(xi, k));
            inner += wk * a;
            sup = std::max(sup, a);
        });
        n.n1 += wx * inner;
        n.n2 += wx * sup;
    });
    return n;
}

} // namespace qk
