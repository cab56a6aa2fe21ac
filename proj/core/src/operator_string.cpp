#include "qkinetic/oscillatory.hpp"
#include "qkinetic/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qk {

namespace {

struct TermInfo {
    Term term;
    const char* name;
};

constexpr std::array<TermInfo, 9> kTerms{{
    {Term::I1, "I1"},
    {Term::I2, "I2"},
    {Term::I3, "I3"},
    {Term::I4_case1, "I4_case1"},
    {Term::I4_case2, "I4_case2"},
    {Term::I4_case3, "I4_case3"},
    {Term::I4_recollision, "I4_recollision"},
    {Term::A_eps, "A_eps"},
    {Term::T_eps, "T_eps"},
}};

/// C: particle a meets a new particle b; T: particles a and b interact.
struct Op {
    bool creates = false;
    int a = 0, b = 0;
};

/// One operator string S O_1 S O_2 ... S f0 with its prefactor. `ops` are
/// ordered by decreasing time.
struct OpString {
    std::vector<Op> ops;
    int observed = 1;
};

/// Strings whose sum forms the term (sums over partner labels).
std::vector<OpString> term_strings(Term t, int j)
{
    switch (t) {
    case Term::I1: {
        std::vector<OpString> out;
        for (int r = 1; r <= j; ++r)
            out.push_back({{{true, r, j + 1}}, j});
        return out;
    }
    case Term::I2:
        if (j < 2)
            return {};
        return {{{{false, 1, 2}}, j}};
    case Term::I3: {
        if (j < 2)
            return {};
        std::vector<OpString> out;
        for (int l = 1; l <= j; ++l)
            out.push_back({{{false, 1, 2}, {true, l, j + 1}}, j});
        return out;
    }
    case Term::I4_case1:
        // {r, j+1} and {l, s} disjoint
        if (j < 3)
            return {};
        return {{{{true, 1, j + 1}, {false, 2, 3}}, j}};
    case Term::I4_case2:
        // r = l, s != j+1
        if (j < 2)
            return {};
        return {{{{true, 1, j + 1}, {false, 1, 2}}, j}};
    case Term::I4_case3:
        // r != l, s = j+1
        if (j < 2)
            return {};
        return {{{{true, 1, j + 1}, {false, 2, j + 1}}, j}};
    case Term::I4_recollision: {
        std::vector<OpString> out;
        for (int r = 1; r <= j; ++r)
            out.push_back({{{true, r, j + 1}, {false, r, j + 1}}, j});
        return out;
    }
    default:
        throw std::invalid_argument("term_strings: not an operator-string term");
    }
}

/// (N - j) / sqrt(eps)^(number of operators) with N = eps^-d, or 1/sqrt(eps)
/// for the pure T term.
double term_prefactor(Term t, int j, double eps, int d)
{
    double n_minus_j = std::pow(eps, -d) - j;
    switch (t) {
    case Term::I1:
        return n_minus_j / std::sqrt(eps);
    case Term::I2:
        return 1.0 / std::sqrt(eps);
    default:
        return n_minus_j / eps;
    }
}

class StringIntegrand {
public:
    StringIntegrand(const OpString& str, bool weak, double t, double eps, const Vec& x, const Vec& v,
                    const InitialDatum& f0, const PotentialSpec& phi)
        : str_(str), weak_(weak), t_(t), eps_(eps), x_(x), v_(v), f0_(f0), phi_(phi), d_(f0.dim())
    {
        dim_ = weak ? 2 * d_ * str.observed : 0;
        for (const auto& op : str.ops)
            dim_ += op.creates ? 3 * d_ : d_;
        particles_ = str.observed;
        for (const auto& op : str.ops)
            if (op.creates)
                ++particles_;
    }

    int dim() const { return dim_; }
    int particles() const { return particles_; }

    /// log of the integrand at z for given operator times, signs, potential
    /// bumps per operator and datum components per particle.
    cplx operator()(const std::vector<double>& z, const std::vector<double>& times, const std::vector<int>& sigma,
                    const std::vector<std::size_t>& bump, const std::vector<std::size_t>& comp) const
    {
        const cplx i(0.0, 1.0);
        std::vector<Vec> xs, vs;
        std::size_t at = 0;
        auto take = [&]() {
            Vec w(d_);
            for (int a = 0; a < d_; ++a)
                w[a] = z[at++];
            return w;
        };
        cplx log = 0.0;
        for (int p = 0; p < str_.observed; ++p) {
            if (weak_) {
                xs.push_back(take());
                vs.push_back(take());
                log += -0.5 * (norm2(xs.back()) + norm2(vs.back())) - d_ * std::log(2.0 * M_PI);
            } else {
                xs.push_back(x_);
                vs.push_back(v_);
            }
        }
        double now = t_;
        auto flow = [&](double to) {
            for (std::size_t p = 0; p < xs.size(); ++p)
                xs[p] -= (now - to) * vs[p];
            now = to;
        };
        for (std::size_t k = 0; k < str_.ops.size(); ++k) {
            const Op& op = str_.ops[k];
            flow(times[k]);
            double s = sigma[k];
            if (op.creates) {
                Vec h = take(), xn = take(), vn = take();
                log += phi_.log_fourier_bump(bump[k], h) + i * dot(h, xs[op.a - 1] - xn) / eps_;
                vs[op.a - 1] -= 0.5 * s * h;
                xs.push_back(xn);
                vs.push_back(vn + 0.5 * s * h);
            } else {
                Vec q = take();
                log += phi_.log_fourier_bump(bump[k], q) + i * dot(q, xs[op.a - 1] - xs[op.b - 1]) / eps_;
                vs[op.a - 1] -= 0.5 * s * q;
                vs[op.b - 1] += 0.5 * s * q;
            }
        }
        flow(0.0);
        for (std::size_t p = 0; p < xs.size(); ++p)
            log += f0_.log_component(comp[p], xs[p], vs[p]);
        return log;
    }

private:
    const OpString& str_;
    bool weak_;
    double t_, eps_;
    Vec x_, v_;
    const InitialDatum& f0_;
    const PotentialSpec& phi_;
    int d_, dim_ = 0, particles_ = 0;
};

/// Advances a mixed-radix counter; false after the last combination.
bool next_combination(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix)
{
    for (std::size_t p = 0; p < digits.size(); ++p) {
        if (++digits[p] < radix[p])
            return true;
        digits[p] = 0;
    }
    return false;
}

/// Sum over signs, bumps and datum components of the closed-form
/// phase-space integral at fixed operator times.
cplx string_at_times(const StringIntegrand& f, const OpString& str, const std::vector<double>& times, SignMode mode,
                     const InitialDatum& f0, const PotentialSpec& phi)
{
    const int d = f0.dim();
    const std::size_t n_ops = str.ops.size();
    const cplx minus_i(0.0, -1.0);
    cplx total = 0.0;
    std::vector<std::size_t> signs(n_ops, 0), sign_radix(n_ops, mode == SignMode::summed ? 2 : 1);
    do {
        std::vector<int> sigma(n_ops);
        cplx weight = 1.0;
        for (std::size_t k = 0; k < n_ops; ++k) {
            sigma[k] = signs[k] == 0 ? 1 : -1;
            weight *= minus_i * static_cast<double>(sigma[k]) / std::pow(2.0 * M_PI, d);
        }
        std::vector<std::size_t> bump(n_ops, 0), bump_radix(n_ops, phi.bumps().size());
        do {
            std::vector<std::size_t> comp(f.particles(), 0), comp_radix(f.particles(), f0.components().size());
            do {
                ComplexQuadratic q = probe_quadratic(
                    f.dim(), [&](const std::vector<double>& z) { return f(z, times, sigma, bump, comp); });
                total += weight * gaussian_integral(q);
            } while (next_combination(comp, comp_radix));
        } while (next_combination(bump, bump_radix));
    } while (next_combination(signs, sign_radix));
    return total;
}

/// Time integral of one operator string: one time on [0, t], or an outer
/// time on [0, t] and a gap on [0, outer] graded at scale eps.
cplx integrate_string(const OpString& str, bool weak, double eps, const InitialDatum& f0, const PotentialSpec& phi,
                      const TermConfig& cfg, int nodes)
{
    Vec x = cfg.x.dim() == 0 ? Vec::zero(f0.dim()) : cfg.x;
    Vec v = cfg.v.dim() == 0 ? Vec::zero(f0.dim()) : cfg.v;
    if (cfg.x.dim() == 0)
        x[0] = 0.3;
    if (cfg.v.dim() == 0)
        v[0] = 0.5;
    StringIntegrand f(str, weak, cfg.t, eps, x, v, f0, phi);
    Rule outer = gauss_legendre(nodes, 0.0, cfg.t);
    cplx total = 0.0;
    for (std::size_t a = 0; a < outer.size(); ++a) {
        double first = outer.nodes[a];
        if (str.ops.size() == 1) {
            total += outer.weights[a] * string_at_times(f, str, {first}, cfg.signs, f0, phi);
            continue;
        }
        Rule gap = composite_gauss_legendre(graded_breaks(eps, first), std::max(4, nodes / 2));
        for (std::size_t b = 0; b < gap.size(); ++b) {
            std::vector<double> times{first, first - gap.nodes[b]};
            total += outer.weights[a] * gap.weights[b] * string_at_times(f, str, times, cfg.signs, f0, phi);
        }
    }
    return total;
}

} // namespace

std::string to_string(Term t)
{
    for (const auto& info : kTerms)
        if (info.term == t)
            return info.name;
    return "unknown";
}

Term term_from_string(const std::string& name)
{
    for (const auto& info : kTerms)
        if (name == info.name)
            return info.term;
    throw std::invalid_argument("unknown term '" + name + "'");
}

double expected_slope(Term t, int dim)
{
    switch (t) {
    case Term::I1:
        return 0.5;
    case Term::I2:
        return dim - 0.5;
    case Term::I3:
    case Term::I4_case1:
    case Term::I4_case2:
    case Term::I4_case3:
        return dim - 1.0;
    case Term::I4_recollision:
        return 0.0;
    case Term::A_eps:
        return dim - 1.0;
    default:
        return std::numeric_limits<double>::quiet_NaN();
    }
}

int default_subsystem(Term t)
{
    switch (t) {
    case Term::I2:
    case Term::I3:
    case Term::I4_case2:
    case Term::I4_case3:
        return 2;
    case Term::I4_case1:
        return 3;
    default:
        return 1;
    }
}

bool weakly_tested(Term t)
{
    return t == Term::I2 || t == Term::I3 || t == Term::I4_case1 || t == Term::I4_case2 || t == Term::I4_case3;
}

SignMode default_sign_mode(Term t)
{
    return t == Term::I1 || t == Term::A_eps || t == Term::T_eps ? SignMode::summed : SignMode::branch;
}

TermValue eval_I_term(const TermSelector& sel, double eps, const InitialDatum& f0, const CrossSection& cs,
                      const TermConfig& cfg)
{
    if (!(eps > 0.0))
        throw std::invalid_argument("eval_I_term: eps must be positive");
    if (f0.homogeneous())
        throw std::invalid_argument("eval_I_term: needs a spatially localized datum");
    if (sel.dim != f0.dim())
        throw std::invalid_argument("eval_I_term: selector and datum dimensions differ");
    int j = sel.j > 0 ? sel.j : default_subsystem(sel.which);
    auto strings = term_strings(sel.which, j);
    TermValue out;
    if (strings.empty() || cs.is_zero())
        return out;
    bool weak = weakly_tested(sel.which);
    const auto& phi = cs.potential();
    double pre = term_prefactor(sel.which, j, eps, f0.dim());
    cplx fine = 0.0, coarse = 0.0;
    for (const auto& str : strings) {
        fine += integrate_string(str, weak, eps, f0, phi, cfg, cfg.time_nodes);
        coarse += integrate_string(str, weak, eps, f0, phi, cfg, std::max(2, cfg.time_nodes / 2));
    }
    out.value = pre * fine;
    out.error = std::abs(pre * (fine - coarse));
    return out;
}

std::vector<double> geometric_ladder(double first, double ratio, int points)
{
    std::vector<double> out;
    double e = first;
    for (int i = 0; i < points; ++i, e *= ratio)
        out.push_back(e);
    return out;
}

ScalingProbe scaling_probe(const TermSelector& sel, const std::vector<double>& ladder, const InitialDatum& f0,
                           const CrossSection& cs, const TermConfig& cfg, double residual_threshold)
{
    if (ladder.size() < 4)
        throw std::invalid_argument("scaling_probe: need at least 4 ladder points");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (!(ladder[i] < ladder[i - 1]))
            throw std::invalid_argument("scaling_probe: ladder must be strictly decreasing");
    ScalingProbe p;
    p.eps = ladder;
    if (sel.which == Term::A_eps) {
        ModelChi chi = ModelChi::standard(sel.dim);
        cplx limit = model_A_limit(chi);
        for (double e : ladder) {
            p.magnitudes.push_back(std::abs(model_A_eps(chi, e) - limit));
            p.errors.push_back(0.0);
        }
    } else if (sel.which == Term::T_eps) {
        Graph g({1});
        TimeLadder times(cfg.t, {0.5 * cfg.t});
        Vec x = cfg.x.dim() == 0 ? Vec::zero(sel.dim) : cfg.x;
        Vec v = cfg.v.dim() == 0 ? Vec::zero(sel.dim) : cfg.v;
        Estimate limit = eval_T_limit(g, times, x, v, f0, cs, {1u << 20, 1, 0});
        for (double e : ladder) {
            Estimate t = eval_T_eps_term(g, times, e, x, v, f0, cs);
            p.magnitudes.push_back(std::abs(t.value - limit.value));
            p.errors.push_back(std::hypot(t.stderr_, limit.stderr_));
        }
    } else {
        for (double e : ladder) {
            TermValue t = eval_I_term(sel, e, f0, cs, cfg);
            p.magnitudes.push_back(std::abs(t.value));
            p.errors.push_back(t.error);
        }
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        lx.push_back(std::log(ladder[i]));
        ly.push_back(std::log(std::max(p.magnitudes[i], std::numeric_limits<double>::min())));
    }
    LineFit fit = fit_line(lx, ly);
    p.slope = fit.slope;
    p.slope_stderr = fit.slope_stderr;
    p.max_residual = fit.max_residual;
    p.reliable = fit.max_residual <= residual_threshold;
    return p;
}

} // namespace qk
