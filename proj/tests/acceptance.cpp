// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed here.
// Usage: acceptance [criterion ...]

#include "qkinetic/histories.hpp"
#include "qkinetic/kernel.hpp"
#include "qkinetic/oscillatory.hpp"
#include "qkinetic/series.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>

using namespace qk;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// 1. scaling exponents of the I terms
constexpr double kSlopeWindow = 0.2;

Outcome scaling_suite()
{
    Outcome o;
    auto ladder = geometric_ladder(1e-1, 1.0 / std::sqrt(10.0), 4);
    auto probe = [&](Term t, int d) {
        auto f0 = InitialDatum::gaussian(d);
        CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, d));
        TermConfig cfg;
        cfg.signs = default_sign_mode(t);
        ScalingProbe p = scaling_probe({t, 0, d}, ladder, f0, cs, cfg);
        double want = expected_slope(t, d);
        bool ok = std::abs(p.slope - want) <= kSlopeWindow;
        o.pass = o.pass && ok;
        o.detail += to_string(t) + "(d=" + std::to_string(d) + ") " + fmt("%.3f/%.1f", p.slope, want) + (ok ? "" : "!") + " ";
    };
    for (Term t : {Term::I1, Term::I2, Term::I3, Term::I4_case1, Term::I4_case2, Term::I4_case3, Term::I4_recollision})
        probe(t, 2);
    probe(Term::I3, 3);
    return o;
}

// 2. model oscillatory integral
constexpr double kModelGap = 0.01;

std::vector<ModelChi> chi_suite(int d)
{
    ModelChi a = ModelChi::standard(d);
    ModelChi b = a;
    b.gx.width = 0.7;
    b.gy.width = 1.4;
    b.geta.center = Vec::zero(d);
    b.geta.center[0] = 0.5;
    ModelChi c = a;
    c.gx.center = Vec::zero(d);
    c.gx.center[0] = 0.3;
    c.gxi.width = 0.8;
    c.gy.center = Vec::zero(d);
    c.gy.center[d - 1] = -0.4;
    return {a, b, c};
}

Outcome model_integral()
{
    Outcome o;
    auto ladder = geometric_ladder(1e-1, 1.0 / std::sqrt(10.0), 4);
    double worst_gap = 0.0, worst_ratio = 0.0;
    for (int d : {2, 3})
        for (const auto& chi : chi_suite(d)) {
            cplx lim = model_A_limit(chi);
            for (double e : ladder) {
                cplx a = model_A_eps(chi, e);
                worst_ratio = std::max(worst_ratio, std::abs(a) / model_A_bound(chi, e));
                if (e == ladder.back())
                    worst_gap = std::max(worst_gap, std::abs(a - lim) / std::abs(lim));
            }
        }
    o.pass = worst_gap < kModelGap && worst_ratio <= 1.0;
    o.detail = fmt("max relative gap %.2e at eps=%.2e (< 0.01); ", worst_gap, ladder.back()) +
               fmt("max |A|/bound %.3f (<= 1)", worst_ratio);
    return o;
}

// 3. term-by-term convergence, n = 1, d = 2
constexpr double kConvergeSigmas = 3.0;

Outcome term_convergence()
{
    DatumComponent comp{1.0, Vec{0.1, 0.0}, Vec{0.4, -0.2}, Vec{1.0, 1.3}, Vec{0.6, 1.2}};
    InitialDatum f0(2, {comp});
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 2));
    auto ladder = geometric_ladder(std::sqrt(0.1), 1.0 / std::sqrt(10.0), 4); // ... 1e-2
    auto r = term_convergence_check(Graph({1}), TimeLadder(1.0, {0.5}), ladder, Vec{0.3, -0.2}, Vec{0.5, 0.4}, f0, cs,
                                    {1u << 21, 4, 0});
    double se = std::hypot(r.values.back().stderr_, r.limit.stderr_);
    Outcome o;
    o.pass = r.decreasing && r.gaps.back() <= kConvergeSigmas * se;
    o.detail = fmt("gap at eps=%.0e: %.2e vs 3 se %.2e; gaps", ladder.back(), r.gaps.back(), kConvergeSigmas * se);
    for (double g : r.gaps)
        o.detail += fmt(" %.2e", g);
    o.detail += r.decreasing ? " decreasing" : " NOT decreasing";
    return o;
}

// 4. Fourier-side representation against direct quadrature
constexpr double kIdentity = 0.02;

Outcome fourier_identity()
{
    auto f0 = InitialDatum::gaussian(1, 1.0, 1.0, Vec{0.2}, Vec{0.1});
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 1));
    TimeLadder times(1.0, {0.5});
    auto good = eval_T_eps_term(Graph({1}), times, 0.1, Vec{0.3}, Vec{0.5}, f0, cs);
    double direct = direct_T_eps_1d(times, 0.1, 0.3, 0.5, f0, cs);
    double rel = std::abs(good.value - direct) / std::abs(direct);
    return {rel < kIdentity, fmt("Fourier side %.8e, direct %.8e, relative %.2e (< 0.02)", good.value, direct, rel)};
}

// 5. uniform envelope
Outcome uniform_envelope()
{
    Outcome o;
    std::vector<std::vector<double>> s1, s2;
    for (double s : {0.0, 0.5, 1.0, 3.0, 10.0, 30.0, 100.0, 1000.0, 1e4})
        s1.push_back({s});
    for (double a : {0.0, 0.5, 5.0, 50.0, 500.0})
        for (double b : {0.0, 2.0, 20.0, 200.0})
            s2.push_back({a, b});
    int points = 0;
    double worst = 0.0;
    for (int d : {2, 3}) {
        std::vector<InitialDatum> data{InitialDatum::gaussian(d, 1.0, 0.8)};
        Vec x0 = Vec::zero(d), v0 = Vec::zero(d), sx(d), sv(d);
        x0[0] = 0.3;
        v0[0] = -0.4;
        for (int a = 0; a < d; ++a) {
            sx[a] = 0.8 + 0.2 * a;
            sv[a] = 1.1 - 0.2 * a;
        }
        data.push_back(InitialDatum(d, {{1.0, x0, v0, sx, sv}}));
        CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, d));
        for (const auto& f0 : data) {
            for (const Graph& g : {Graph({1}), Graph({1, 1}), Graph({1, 2})}) {
                const auto& pts = g.order() == 1 ? s1 : s2;
                TimeLadder times = g.order() == 1 ? TimeLadder(1.0, {0.6}) : TimeLadder(1.0, {0.6, 0.3});
                auto r = uniform_bound_check(g, times, pts, f0, cs);
                o.pass = o.pass && r.ok;
                points += static_cast<int>(pts.size());
                for (double v : r.scaled)
                    worst = std::max(worst, v / r.envelope);
            }
        }
    }
    o.detail = fmt("%.0f sampled s points, n in {1,2}, d in {2,3}; max int g prod(1+s)^d / envelope %.3e", points, worst);
    return o;
}

// 6. conservation at collision nodes
constexpr double kConservation = 1e-12;

Outcome conservation()
{
    Rng rng(2024, 6);
    double worst_p = 0.0, worst_e = 0.0;
    auto momentum = [&](const Trajectories& tr) {
        for (const auto& nd : tr.nodes) {
            Vec before = nd.pre_a + nd.pre_b, after = nd.post_a + nd.post_b;
            double scale = std::max(norm(nd.pre_a) + norm(nd.pre_b), 1e-300);
            worst_p = std::max(worst_p, norm(before - after) / scale);
        }
    };
    const int histories = 10000;
    for (int i = 0; i < histories; ++i) {
        int n = 1 + i % 5, d = 2 + i % 2;
        auto c = random_classical_history(n, d, rng);
        auto tr = classical_trajectories(c);
        momentum(tr);
        for (const auto& nd : tr.nodes) {
            double e0 = norm2(nd.pre_a) + norm2(nd.pre_b), e1 = norm2(nd.post_a) + norm2(nd.post_b);
            worst_e = std::max(worst_e, std::abs(e0 - e1) / std::max(e0, 1e-300));
        }
        auto h = random_eps_history(n, d, 0.05, rng);
        momentum(eps_trajectories(h));
        momentum(bar_trajectories(h));
        momentum(substituted_bar_trajectories(h));
    }
    return {worst_p <= kConservation && worst_e <= kConservation,
            fmt("%.0f histories; max relative momentum defect %.2e, energy defect %.2e (<= 1e-12)", histories, worst_p,
                worst_e)};
}

// 7. Maxwellian equilibrium
Outcome equilibrium()
{
    auto maxwellian = [](const Vec& v) { return std::exp(-0.5 * norm2(v)) / std::pow(2.0 * M_PI, 1.5); };
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 3));
    VelocityProposal prop{Vec::zero(3), 1.4};
    Rng rng(7, 7);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 16; ++i) {
        Vec v = 1.5 * rng.normal_vec(3);
        auto q = boltzmann_Q(maxwellian, v, cs, prop, {20000, 17, static_cast<std::uint64_t>(i)});
        // gain and loss cancel sample by sample; allow round-off of the loss term
        double tol = 3.0 * q.q.stderr_ + 1e-12 * q.loss.value;
        ok = ok && std::abs(q.q.value) <= tol;
        worst = std::max(worst, std::abs(q.q.value) / q.loss.value);
    }
    auto m = collision_moments(maxwellian, cs, prop, {400000, 19, 0});
    double worst_moment = 0.0;
    for (const auto& e : m) {
        double tol = 3.0 * e.stderr_ + 1e-12;
        ok = ok && std::abs(e.value) <= tol;
        worst_moment = std::max(worst_moment, std::abs(e.value));
    }
    return {ok, fmt("16 velocities, max |Q|/loss %.2e; max |moment| %.2e (3 se)", worst, worst_moment)};
}

// 8. series against the Picard oracle
Outcome series_vs_picard()
{
    DatumComponent a{0.5, Vec::zero(3), Vec{0.9, 0.0, 0.0}, Vec{1.0, 1.0, 1.0}, Vec{0.7, 1.0, 1.0}};
    DatumComponent b{0.5, Vec::zero(3), Vec{-0.9, 0.0, 0.0}, Vec{1.0, 1.0, 1.0}, Vec{0.7, 1.0, 1.0}};
    InitialDatum f0(3, {a, b}, true);
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 3));
    Vec v1{0.3, 0.2, 0.0};

    // growth constant calibrated on a short run, then t = t0 / 4
    SeriesConfig cal;
    cal.n_max = 3;
    cal.budget = 50000;
    cal.t = 1.0;
    cal.allow_beyond_radius = true;
    auto rc = boltzmann_series(Vec::zero(3), v1, cal, f0, cs);
    SeriesConfig cfg = cal;
    cfg.t = rc.t0 / 4.0;
    cfg.c_hat = rc.c_hat;
    cfg.budget = 200000;
    cfg.allow_beyond_radius = false;
    auto s = boltzmann_series(Vec::zero(3), v1, cfg, f0, cs);

    PicardConfig pc;
    pc.iterations = 4;
    auto p = picard_with_errors(v1, cfg.t, f0, cs, pc);
    double diff = std::abs(s.total.value - p.value);
    double combined = s.truncation + 3.0 * std::hypot(s.total.stderr_, p.statistical) + p.grid_error;
    Outcome o{diff <= combined, ""};
    o.detail = fmt("t=%.4f series %.6f picard %.6f; ", cfg.t, s.total.value, p.value) +
               fmt("|diff| %.2e vs combined %.2e (truncation %.1e", diff, combined, s.truncation) +
               fmt(", grid %.1e)", p.grid_error);
    return o;
}

// 9. combinatorics and phase algebra
constexpr double kPhase = 1e-12;

Outcome combinatorics()
{
    bool ok = true;
    long long fact = 1;
    for (int n = 0; n <= 7; ++n) {
        if (n > 0)
            fact *= n;
        auto gs = enumerate_graphs(n);
        std::set<std::vector<int>> unique;
        for (const auto& g : gs)
            unique.insert(g.labels());
        ok = ok && static_cast<long long>(gs.size()) == fact && static_cast<long long>(unique.size()) == fact;
    }
    Rng rng(9, 9);
    int bad_det = 0;
    for (int i = 0; i < 1000; ++i)
        if (std::llabs(determinant(interaction_matrix(random_graph(1 + i % 8, rng)))) != 1)
            ++bad_det;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        auto h = random_eps_history(1 + i % 3, 2 + i % 2, i % 2 ? 0.1 : 0.01, rng);
        double direct = direct_phase(h);
        worst = std::max(worst, std::abs(direct - reassembled_phase(h)) / std::max(1.0, std::abs(direct)));
    }
    ok = ok && bad_det == 0 && worst <= kPhase;
    return {ok, fmt("graph counts n! for n<=7; %.0f of 1000 determinants != +-1; max phase defect %.2e (<= 1e-12)",
                    bad_det, worst)};
}

// 10. delta identities
Outcome delta_identities()
{
    auto gamma = [](const Vec& eta) {
        Vec c = eta - Vec{0.15, 0.4, 0.25};
        return std::exp(-0.5 * norm2(c));
    };
    auto gamma2 = [](const Vec& eta) { return std::exp(-0.5 * norm2(eta)); };
    auto l3 = delta_reduce_ladder(gamma, Vec{0.3, 0.8, 0.5});
    auto l2 = delta_reduce_ladder(gamma2, Vec{0.8, 1.1});
    auto dc = mollified_delta_check({10, 100, 1000});
    double last = dc.rows.back().relative_error;
    bool ok = l3.relative_error < 0.01 && l2.relative_error < 0.01 && last < 1e-3;
    return {ok, fmt("mollifier ladder vs polar reduction %.2e (d=3), %.2e (d=2) (< 0.01); ", l3.relative_error,
                    l2.relative_error) +
                    fmt("Dirichlet integral vs pi g(0) at T=1000 %.2e (< 1e-3)", last)};
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::function<Outcome()>> criteria{scaling_suite,   model_integral, term_convergence, fourier_identity,
                                                   uniform_envelope, conservation,   equilibrium,      series_vs_picard,
                                                   combinatorics,   delta_identities};
    std::set<int> pick;
    for (int i = 1; i < argc; ++i)
        pick.insert(std::atoi(argv[i]));

    int failed = 0;
    for (int id = 1; id <= static_cast<int>(criteria.size()); ++id) {
        if (!pick.empty() && !pick.count(id))
            continue;
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[id - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d: %s  %s  [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), sec);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
