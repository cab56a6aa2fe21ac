#include "cli.hpp"

#include "qkinetic/kernel.hpp"
#include "qkinetic/oscillatory.hpp"
#include "qkinetic/series.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#ifndef QKINETIC_VERSION
#define QKINETIC_VERSION "unknown"
#endif

using nlohmann::json;

namespace qk {

void to_json(json& j, const GaussianBump& b)
{
    j = json{{"amplitude", b.amplitude}, {"width", b.width}};
}

void from_json(const json& j, GaussianBump& b)
{
    b.amplitude = j.value("amplitude", 1.0);
    b.width = j.value("width", 1.0);
}

void to_json(json& j, const DatumComponent& c)
{
    j = json{{"weight", c.weight}, {"x0", c.x0.to_vector()}, {"v0", c.v0.to_vector()},
             {"sx", c.sx.to_vector()}, {"sv", c.sv.to_vector()}};
}

void from_json(const json& j, DatumComponent& c)
{
    c.weight = j.value("weight", 1.0);
    c.x0 = Vec::from(j.at("x0").get<std::vector<double>>());
    c.v0 = Vec::from(j.at("v0").get<std::vector<double>>());
    c.sx = Vec::from(j.at("sx").get<std::vector<double>>());
    c.sv = Vec::from(j.at("sv").get<std::vector<double>>());
}

namespace cli {

void to_json(json& j, const RunConfig& c)
{
    j = json{{"dim", c.dim},
             {"potential", c.potential},
             {"datum", {{"homogeneous", c.homogeneous}, {"components", c.datum}}},
             {"seed", c.seed},
             {"budget", c.budget},
             {"t", c.t},
             {"n_max", c.n_max},
             {"c_hat", c.c_hat},
             {"allow_beyond_radius", c.allow_beyond_radius},
             {"picard_iterations", c.picard_iterations},
             {"x", c.x},
             {"v", c.v},
             {"w", c.w},
             {"grid", c.grid},
             {"term", c.term},
             {"signs", c.signs},
             {"ladder", {{"first", c.ladder_first}, {"points", c.ladder_points}}},
             {"order", c.order},
             {"oracle", c.oracle},
             {"eps", c.eps},
             {"tolerances",
              {{"slope", c.tol.slope}, {"relative", c.tol.relative}, {"sigmas", c.tol.sigmas}, {"delta", c.tol.delta},
               {"reduction", c.tol.reduction}}},
             {"output", c.output}};
}

void from_json(const json& j, RunConfig& c)
{
    RunConfig d;
    c.dim = j.value("dim", d.dim);
    c.potential = j.value("potential", d.potential);
    if (j.contains("datum")) {
        const auto& dj = j.at("datum");
        c.homogeneous = dj.value("homogeneous", false);
        c.datum = dj.value("components", std::vector<DatumComponent>{});
    }
    c.seed = j.value("seed", d.seed);
    c.budget = j.value("budget", d.budget);
    c.t = j.value("t", d.t);
    c.n_max = j.value("n_max", d.n_max);
    c.c_hat = j.value("c_hat", d.c_hat);
    c.allow_beyond_radius = j.value("allow_beyond_radius", d.allow_beyond_radius);
    c.picard_iterations = j.value("picard_iterations", d.picard_iterations);
    c.x = j.value("x", d.x);
    c.v = j.value("v", d.v);
    c.w = j.value("w", d.w);
    c.grid = j.value("grid", d.grid);
    c.term = j.value("term", d.term);
    c.signs = j.value("signs", d.signs);
    if (j.contains("ladder")) {
        c.ladder_first = j.at("ladder").value("first", d.ladder_first);
        c.ladder_points = j.at("ladder").value("points", d.ladder_points);
    }
    c.order = j.value("order", d.order);
    c.oracle = j.value("oracle", d.oracle);
    c.eps = j.value("eps", d.eps);
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        c.tol.slope = t.value("slope", d.tol.slope);
        c.tol.relative = t.value("relative", d.tol.relative);
        c.tol.sigmas = t.value("sigmas", d.tol.sigmas);
        c.tol.delta = t.value("delta", d.tol.delta);
        c.tol.reduction = t.value("reduction", d.tol.reduction);
    }
    c.output = j.value("output", d.output);
}

namespace {

json estimate(const Estimate& e)
{
    return {{"value", e.value}, {"stderr", e.stderr_}};
}

Vec point(std::vector<double>& stored, int dim, std::vector<double> fallback, const char* name)
{
    if (stored.empty()) {
        fallback.resize(dim, 0.0);
        stored = fallback;
    }
    if (static_cast<int>(stored.size()) != dim)
        throw ConfigError(std::string(name) + ": expected " + std::to_string(dim) + " components");
    return Vec::from(stored);
}

CrossSection potential(RunConfig& cfg)
{
    if (cfg.potential.empty())
        cfg.potential = {{1.0, 1.0}};
    for (const auto& b : cfg.potential)
        if (!(b.width > 0.0))
            throw ConfigError("potential: widths must be positive");
    return CrossSection(PotentialSpec(cfg.dim, cfg.potential));
}

/// Anisotropic Gaussian: with equal widths in x and v the first order limit
/// term vanishes identically, which makes convergence checks vacuous.
InitialDatum anisotropic(int dim)
{
    Vec x0 = Vec::zero(dim), v0 = Vec::zero(dim), sx(dim), sv(dim);
    x0[0] = 0.1;
    v0[0] = 0.4;
    if (dim > 1)
        v0[1] = -0.2;
    for (int a = 0; a < dim; ++a) {
        sx[a] = a == 1 ? 1.3 : 1.0;
        sv[a] = a == 1 ? 1.2 : (a == 0 ? 0.6 : 1.0);
    }
    return InitialDatum(dim, {{1.0, x0, v0, sx, sv}});
}

InitialDatum bimodal_homogeneous(int dim)
{
    Vec sv(dim), sx(dim);
    for (int a = 0; a < dim; ++a) {
        sv[a] = a == 0 ? 0.7 : 1.0;
        sx[a] = 1.0;
    }
    Vec v0 = Vec::zero(dim);
    v0[0] = 0.9;
    DatumComponent a{0.5, Vec::zero(dim), v0, sx, sv};
    DatumComponent b{0.5, Vec::zero(dim), -1.0 * v0, sx, sv};
    return InitialDatum(dim, {a, b}, true);
}

InitialDatum datum(RunConfig& cfg, const InitialDatum& fallback)
{
    if (cfg.datum.empty()) {
        cfg.datum = fallback.components();
        cfg.homogeneous = fallback.homogeneous();
        return fallback;
    }
    for (const auto& c : cfg.datum) {
        for (const Vec* v : {&c.x0, &c.v0, &c.sx, &c.sv})
            if (v->dim() != cfg.dim)
                throw ConfigError("datum: component vectors must have dim entries");
        if (!(c.weight > 0.0))
            throw ConfigError("datum: weights must be positive");
        for (int a = 0; a < cfg.dim; ++a)
            if (!(c.sx[a] > 0.0) || !(c.sv[a] > 0.0))
                throw ConfigError("datum: standard deviations must be positive");
    }
    return InitialDatum(cfg.dim, cfg.datum, cfg.homogeneous);
}

std::vector<double> ladder(RunConfig& cfg, double default_first)
{
    if (cfg.ladder_first <= 0.0)
        cfg.ladder_first = default_first;
    if (cfg.ladder_points < 4)
        throw ConfigError("ladder: need at least 4 points");
    return geometric_ladder(cfg.ladder_first, 1.0 / std::sqrt(10.0), cfg.ladder_points);
}

// ---------------------------------------------------------------------------

void cross_section(RunConfig& cfg, RunResult& r)
{
    if (cfg.dim != 2 && cfg.dim != 3)
        throw ConfigError("cross-section: dim must be 2 or 3");
    if (cfg.grid < 4)
        throw ConfigError("cross-section: grid must be at least 4");
    CrossSection cs = potential(cfg);
    std::vector<double> wdef{0.0, 0.0, 0.0};
    wdef[cfg.dim - 1] = 1.0;
    Vec w = point(cfg.w, cfg.dim, wdef, "w");
    if (norm(w) == 0.0)
        throw ConfigError("cross-section: w must be nonzero");

    r.csv_header = {"omega_polar", "omega_azimuth", "B"};
    double peak = 0.0;
    if (cfg.dim == 2) {
        for (int i = 0; i < cfg.grid; ++i) {
            double th = 2.0 * M_PI * i / cfg.grid;
            double b = cs(Vec{std::cos(th), std::sin(th)}, w);
            peak = std::max(peak, b);
            r.csv_rows.push_back({th, 0.0, b});
        }
    } else {
        for (int i = 0; i < cfg.grid; ++i) {
            double th = M_PI * (i + 0.5) / cfg.grid;
            for (int k = 0; k < 2 * cfg.grid; ++k) {
                double ph = M_PI * k / cfg.grid;
                Vec om{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
                double b = cs(om, w);
                peak = std::max(peak, b);
                r.csv_rows.push_back({th, ph, b});
            }
        }
    }
    double total = sphere_integral(cfg.dim, w, cfg.grid, [&](const Vec& om) { return cs(om, w); });
    double coarse = sphere_integral(cfg.dim, w, cfg.grid / 2, [&](const Vec& om) { return cs(om, w); });
    r.document["results"] = {{"total_rate", {{"value", total}, {"error", std::abs(total - coarse)}}},
                             {"max", peak},
                             {"prefactor", cs.prefactor()}};
}

void solve(RunConfig& cfg, RunResult& r)
{
    CrossSection cs = potential(cfg);
    InitialDatum f0 = datum(cfg, cfg.homogeneous ? bimodal_homogeneous(cfg.dim) : anisotropic(cfg.dim));
    Vec x = point(cfg.x, cfg.dim, {}, "x");
    Vec v = point(cfg.v, cfg.dim, {0.5}, "v");
    if (!(cfg.t > 0.0))
        throw ConfigError("solve: t must be positive");
    if (cfg.n_max < 0)
        throw ConfigError("solve: n_max must be nonnegative");

    SeriesConfig sc;
    sc.n_max = cfg.n_max;
    sc.budget = cfg.budget;
    sc.seed = cfg.seed;
    sc.t = cfg.t;
    sc.c_hat = cfg.c_hat;
    sc.allow_beyond_radius = cfg.allow_beyond_radius;
    SeriesResult s = boltzmann_series(x, v, sc, f0, cs);

    json orders = json::array();
    r.csv_header = {"n", "graphs", "value", "stderr"};
    for (const auto& o : s.orders) {
        orders.push_back({{"n", o.n}, {"graphs", o.graphs}, {"value", o.value.value}, {"stderr", o.value.stderr_}});
        r.csv_rows.push_back({double(o.n), double(o.graphs), o.value.value, o.value.stderr_});
    }
    double free = f0.homogeneous() ? f0.velocity_density(v) : f0(x - cfg.t * v, v);
    r.document["results"] = {{"orders", orders},
                             {"total", estimate(s.total)},
                             {"truncation", s.truncation},
                             {"c_hat", s.c_hat},
                             {"t0", s.t0},
                             {"ratio", s.ratio},
                             {"within_radius", s.within_radius},
                             {"free_flight", free}};
    if (!s.within_radius)
        r.failures.push_back("t beyond the convergence radius");
}

void probe(RunConfig& cfg, RunResult& r)
{
    Term term;
    try {
        term = term_from_string(cfg.term);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.dim < 1 || cfg.dim > 3)
        throw ConfigError("probe: dim must be 1, 2 or 3");
    CrossSection cs = potential(cfg);
    InitialDatum f0 = datum(cfg, term == Term::T_eps ? anisotropic(cfg.dim) : InitialDatum::gaussian(cfg.dim));
    auto eps = ladder(cfg, term == Term::T_eps ? 1.0 / std::sqrt(10.0) : 0.1);

    TermConfig tc;
    if (cfg.signs == "auto")
        tc.signs = default_sign_mode(term);
    else if (cfg.signs == "summed")
        tc.signs = SignMode::summed;
    else if (cfg.signs == "branch")
        tc.signs = SignMode::branch;
    else
        throw ConfigError("signs: expected auto, summed or branch");
    if (term == Term::T_eps) {
        tc.x = point(cfg.x, cfg.dim, {0.2, -0.1}, "x");
        tc.v = point(cfg.v, cfg.dim, {0.5, 0.3}, "v");
    }

    ScalingProbe p = scaling_probe({term, 0, cfg.dim}, eps, f0, cs, tc);
    r.csv_header = {"eps", "value", "stderr"};
    for (std::size_t i = 0; i < eps.size(); ++i)
        r.csv_rows.push_back({eps[i], p.magnitudes[i], p.errors[i]});
    double expected = expected_slope(term, cfg.dim);
    r.document["results"] = {{"term", to_string(term)},
                             {"signs", tc.signs == SignMode::summed ? "summed" : "branch"},
                             {"slope", p.slope},
                             {"slope_stderr", p.slope_stderr},
                             {"max_residual", p.max_residual},
                             {"reliable", p.reliable},
                             {"expected", std::isnan(expected) ? json(nullptr) : json(expected)},
                             {"tolerance", cfg.tol.slope}};
    if (!p.reliable)
        r.failures.push_back("fit residual above threshold");
    if (!std::isnan(expected) && std::abs(p.slope - expected) > cfg.tol.slope)
        r.failures.push_back("slope " + std::to_string(p.slope) + " outside " + std::to_string(expected) + " +- " +
                             std::to_string(cfg.tol.slope));
}

void converge(RunConfig& cfg, RunResult& r)
{
    if (cfg.order != 1 && cfg.order != 2)
        throw ConfigError("converge: order must be 1 or 2");
    if (cfg.dim < 2)
        throw ConfigError("converge: the limit needs dim >= 2");
    CrossSection cs = potential(cfg);
    InitialDatum f0 = datum(cfg, anisotropic(cfg.dim));
    if (f0.homogeneous())
        throw ConfigError("converge: needs a spatially localized datum");
    Vec x = point(cfg.x, cfg.dim, {0.3, -0.2}, "x");
    Vec v = point(cfg.v, cfg.dim, {0.5, 0.4}, "v");
    auto eps = ladder(cfg, 1.0 / std::sqrt(10.0));
    const double t = 1.0;
    Graph g = cfg.order == 1 ? Graph({1}) : Graph({1, 1});
    TimeLadder times = cfg.order == 1 ? TimeLadder(t, {0.5 * t}) : TimeLadder(t, {2.0 * t / 3.0, t / 3.0});

    ConvergenceReport rep = term_convergence_check(g, times, eps, x, v, f0, cs, {cfg.budget, cfg.seed, 0});
    r.csv_header = {"eps", "value", "stderr", "gap"};
    json rows = json::array();
    for (std::size_t i = 0; i < eps.size(); ++i) {
        r.csv_rows.push_back({eps[i], rep.values[i].value, rep.values[i].stderr_, rep.gaps[i]});
        rows.push_back({{"eps", eps[i]}, {"value", rep.values[i].value}, {"stderr", rep.values[i].stderr_},
                        {"gap", rep.gaps[i]}});
    }
    double se = std::hypot(rep.values.back().stderr_, rep.limit.stderr_);
    r.document["results"] = {{"limit", estimate(rep.limit)},
                             {"ladder", rows},
                             {"final_gap", rep.gaps.back()},
                             {"final_tolerance", cfg.tol.sigmas * se},
                             {"decreasing", rep.decreasing}};
    if (!rep.decreasing)
        r.failures.push_back("gaps do not decrease along the ladder");
    if (rep.gaps.back() > cfg.tol.sigmas * se)
        r.failures.push_back("final gap above " + std::to_string(cfg.tol.sigmas) + " combined stderr");
}

void bound_check(RunConfig& cfg, RunResult& r)
{
    if (cfg.dim < 2 || cfg.dim > 3)
        throw ConfigError("bound-check: dim must be 2 or 3");
    CrossSection cs = potential(cfg);
    InitialDatum f0 = datum(cfg, InitialDatum::gaussian(cfg.dim, 1.0, 0.8));
    if (f0.homogeneous())
        throw ConfigError("bound-check: needs a spatially localized datum");

    std::vector<std::vector<double>> s1, s2;
    for (double s : {0.0, 0.5, 1.0, 3.0, 10.0, 30.0, 100.0, 1000.0})
        s1.push_back({s});
    for (double a : {0.0, 1.0, 10.0, 100.0})
        for (double b : {0.0, 2.0, 50.0})
            s2.push_back({a, b});
    struct Case {
        const char* name;
        Graph g;
        TimeLadder times;
        const std::vector<std::vector<double>>* pts;
    };
    std::vector<Case> cases{{"n1", Graph({1}), TimeLadder(1.0, {0.6}), &s1},
                            {"n2_chain", Graph({1, 2}), TimeLadder(1.0, {0.6, 0.3}), &s2},
                            {"n2_star", Graph({1, 1}), TimeLadder(1.0, {0.6, 0.3}), &s2}};
    r.csv_header = {"n", "s1", "s2", "integral", "scaled", "envelope"};
    json out = json::object();
    for (const auto& c : cases) {
        UniformBoundReport rep = uniform_bound_check(c.g, c.times, *c.pts, f0, cs);
        int n = c.g.order();
        for (std::size_t i = 0; i < c.pts->size(); ++i)
            r.csv_rows.push_back({double(n), (*c.pts)[i][0], n > 1 ? (*c.pts)[i][1] : 0.0, rep.integrals[i],
                                  rep.scaled[i], rep.envelope});
        out[c.name] = {{"ok", rep.ok},
                       {"constant", rep.constant},
                       {"observed_constant", rep.observed_constant},
                       {"envelope", rep.envelope}};
        if (n == 1)
            out[c.name]["decay_slope"] = rep.decay_slope;
        if (!rep.ok)
            r.failures.push_back(std::string("envelope violated for ") + c.name);
    }

    ModelChi chi = ModelChi::standard(cfg.dim);
    json model = json::array();
    for (double e : geometric_ladder(0.1, 1.0 / std::sqrt(10.0), 4)) {
        double a = std::abs(model_A_eps(chi, e)), b = model_A_bound(chi, e);
        model.push_back({{"eps", e}, {"abs_A", a}, {"bound", b}});
        if (a > b)
            r.failures.push_back("model integral above its bound at eps " + std::to_string(e));
    }
    out["model"] = model;
    r.document["results"] = out;
}

void delta_check(RunConfig& cfg, RunResult& r)
{
    std::vector<double> Ts{10, 20, 40, 80, 160, 320, 640, 1000};
    DeltaCheckReport rep = mollified_delta_check(Ts);
    r.csv_header = {"T", "value", "fourier", "relative_error"};
    for (const auto& row : rep.rows)
        r.csv_rows.push_back({row.T, row.value, row.fourier, row.relative_error});
    json res = {{"final_relative_error", rep.rows.back().relative_error},
                {"tolerance", cfg.tol.delta},
                {"odd_value", rep.odd_value},
                {"halving", rep.halving}};
    if (rep.rows.back().relative_error > cfg.tol.delta)
        r.failures.push_back("mollified delta misses pi g(0)");

    if (cfg.dim == 2 || cfg.dim == 3) {
        Vec w = point(cfg.w, cfg.dim, {0.3, 0.8, 0.5}, "w");
        Vec c = 0.5 * w;
        auto gamma = [c](const Vec& eta) {
            Vec d = eta - c;
            return std::exp(-0.5 * dot(d, d));
        };
        MollifierLadder ml = delta_reduce_ladder(gamma, w);
        res["reduction"] = {{"widths", ml.widths},
                            {"values", ml.values},
                            {"extrapolated", ml.extrapolated},
                            {"reference", ml.reference},
                            {"relative_error", ml.relative_error},
                            {"tolerance", cfg.tol.reduction}};
        if (ml.relative_error > cfg.tol.reduction)
            r.failures.push_back("mollifier ladder misses the polar reduction");
    }
    r.document["results"] = res;
}

void oracle_compare(RunConfig& cfg, RunResult& r)
{
    if (cfg.oracle == "fourier") {
        if (cfg.datum.empty() && cfg.potential.empty())
            cfg.dim = 1;
        if (cfg.dim != 1)
            throw ConfigError("oracle-compare: the direct oracle needs dim 1");
        CrossSection cs = potential(cfg);
        InitialDatum f0 = datum(cfg, InitialDatum::gaussian(1, 1.0, 1.0, Vec{0.2}, Vec{0.1}));
        if (f0.homogeneous())
            throw ConfigError("oracle-compare: needs a spatially localized datum");
        Vec x = point(cfg.x, 1, {0.3}, "x");
        Vec v = point(cfg.v, 1, {0.5}, "v");
        if (!(cfg.eps > 0.0))
            throw ConfigError("oracle-compare: eps must be positive");
        const double t = 1.0;
        TimeLadder times(t, {0.5 * t});
        Estimate good = eval_T_eps_term(Graph({1}), times, cfg.eps, x, v, f0, cs);
        double direct = direct_T_eps_1d(times, cfg.eps, x[0], v[0], f0, cs);
        double rel = std::abs(good.value - direct) / std::max(std::abs(direct), 1e-300);
        r.document["results"] = {{"fourier_side", estimate(good)},
                                 {"direct", direct},
                                 {"relative_difference", rel},
                                 {"tolerance", cfg.tol.relative}};
        if (rel > cfg.tol.relative)
            r.failures.push_back("Fourier-side value and direct quadrature disagree");
        return;
    }
    if (cfg.oracle != "picard")
        throw ConfigError("oracle: expected fourier or picard");

    if (cfg.datum.empty())
        cfg.dim = 3;
    CrossSection cs = potential(cfg);
    InitialDatum f0 = datum(cfg, bimodal_homogeneous(cfg.dim));
    if (!f0.homogeneous())
        throw ConfigError("oracle-compare: the Picard oracle needs a homogeneous datum");
    Vec v = point(cfg.v, cfg.dim, {0.3, 0.2}, "v");
    SeriesConfig sc;
    sc.n_max = cfg.n_max;
    sc.budget = cfg.budget;
    sc.seed = cfg.seed;
    sc.t = cfg.t;
    sc.c_hat = cfg.c_hat;
    sc.allow_beyond_radius = cfg.allow_beyond_radius;
    SeriesResult s = boltzmann_series(Vec::zero(cfg.dim), v, sc, f0, cs);
    PicardConfig pc;
    pc.iterations = cfg.picard_iterations;
    pc.seed = cfg.seed;
    PicardReport p = picard_with_errors(v, cfg.t, f0, cs, pc);
    double diff = std::abs(s.total.value - p.value);
    double combined = s.truncation + cfg.tol.sigmas * std::hypot(s.total.stderr_, p.statistical) + p.grid_error;
    r.document["results"] = {{"series", estimate(s.total)},
                             {"truncation", s.truncation},
                             {"picard", {{"value", p.value}, {"stderr", p.statistical}, {"grid_error", p.grid_error}}},
                             {"difference", diff},
                             {"tolerance", combined}};
    if (diff > combined)
        r.failures.push_back("series and Picard oracle disagree");
}

void write_csv(const std::string& path, const RunResult& r)
{
    std::ofstream f(path);
    if (!f)
        throw ConfigError("cannot write " + path);
    f << std::setprecision(17);
    for (std::size_t i = 0; i < r.csv_header.size(); ++i)
        f << (i ? "," : "") << r.csv_header[i];
    f << "\n";
    for (const auto& row : r.csv_rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            f << (i ? "," : "") << row[i];
        f << "\n";
    }
}

} // namespace

RunResult run(const std::string& command, RunConfig cfg)
{
    auto start = std::chrono::steady_clock::now();
    RunResult r;
    if (cfg.budget == 0)
        throw ConfigError("budget must be positive");
    if (cfg.dim < 1)
        throw ConfigError("dim must be positive");
    try {
        if (command == "cross-section")
            cross_section(cfg, r);
        else if (command == "solve")
            solve(cfg, r);
        else if (command == "probe")
            probe(cfg, r);
        else if (command == "converge")
            converge(cfg, r);
        else if (command == "bound-check")
            bound_check(cfg, r);
        else if (command == "delta-check")
            delta_check(cfg, r);
        else if (command == "oracle-compare")
            oracle_compare(cfg, r);
        else
            throw ConfigError("unknown command " + command);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    r.status = r.failures.empty() ? 0 : 1;
    r.document["command"] = command;
    r.document["config"] = cfg;
    r.document["seed"] = cfg.seed;
    r.document["versions"] = {{"qkinetic", QKINETIC_VERSION},
                              {"compiler", __VERSION__},
                              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    r.document["failures"] = r.failures;
    r.document["passed"] = r.failures.empty();
    r.document["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"qkinetic: finite-eps hierarchy terms and Boltzmann series"};
    app.require_subcommand(1);
    std::string config_path, ladder_spec, w_spec, x_spec, v_spec;
    bool as_json = false;
    RunConfig flags;

    for (const auto& name : commands()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--dim", flags.dim);
        sub->add_option("--seed", flags.seed);
        sub->add_option("--budget", flags.budget, "Monte Carlo samples");
        sub->add_option("--out", flags.output, "result path (.json, or .csv for the table)");
        sub->add_flag("--json", as_json, "print the result document on stdout");
        sub->add_option("--x", x_spec, "comma separated position");
        sub->add_option("--v", v_spec, "comma separated velocity");
        if (name == "cross-section") {
            sub->add_option("--w", w_spec, "comma separated relative velocity");
            sub->add_option("--grid", flags.grid);
        }
        if (name == "solve" || name == "oracle-compare") {
            sub->add_option("--t", flags.t);
            sub->add_option("--nmax", flags.n_max);
            sub->add_option("--c-hat", flags.c_hat);
            sub->add_flag("--allow-beyond-radius", flags.allow_beyond_radius);
        }
        if (name == "probe") {
            sub->add_option("--term", flags.term);
            sub->add_option("--signs", flags.signs, "auto, summed or branch");
        }
        if (name == "probe" || name == "converge")
            sub->add_option("--ladder", ladder_spec, "first:points");
        if (name == "converge")
            sub->add_option("--n", flags.order);
        if (name == "delta-check")
            sub->add_option("--w", w_spec, "comma separated relative velocity");
        if (name == "oracle-compare") {
            sub->add_option("--oracle", flags.oracle, "fourier or picard");
            sub->add_option("--eps", flags.eps);
            sub->add_option("--iterations", flags.picard_iterations);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    CLI::App* sub = app.get_subcommands().front();
    std::string command = sub->get_name();

    auto list = [](const std::string& s) {
        std::vector<double> v;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ','))
            v.push_back(std::stod(item));
        return v;
    };

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f)
                throw ConfigError("cannot read " + config_path);
            cfg = json::parse(f).get<RunConfig>();
        }
        // flags override the file
        auto given = [&](const char* opt) {
            const CLI::Option* o = sub->get_option_no_throw(opt);
            return o != nullptr && o->count() > 0;
        };
        if (given("--dim"))
            cfg.dim = flags.dim;
        if (given("--seed"))
            cfg.seed = flags.seed;
        if (given("--budget"))
            cfg.budget = flags.budget;
        if (given("--out"))
            cfg.output = flags.output;
        if (given("--grid"))
            cfg.grid = flags.grid;
        if (given("--t"))
            cfg.t = flags.t;
        if (given("--nmax"))
            cfg.n_max = flags.n_max;
        if (given("--c-hat"))
            cfg.c_hat = flags.c_hat;
        if (given("--allow-beyond-radius"))
            cfg.allow_beyond_radius = true;
        if (given("--term"))
            cfg.term = flags.term;
        if (given("--signs"))
            cfg.signs = flags.signs;
        if (given("--n"))
            cfg.order = flags.order;
        if (given("--oracle"))
            cfg.oracle = flags.oracle;
        if (given("--eps"))
            cfg.eps = flags.eps;
        if (given("--iterations"))
            cfg.picard_iterations = flags.picard_iterations;
        if (given("--x"))
            cfg.x = list(x_spec);
        if (given("--v"))
            cfg.v = list(v_spec);
        if (given("--w"))
            cfg.w = list(w_spec);
        if (given("--ladder")) {
            auto colon = ladder_spec.find(':');
            if (colon == std::string::npos)
                throw ConfigError("ladder: expected first:points");
            cfg.ladder_first = std::stod(ladder_spec.substr(0, colon));
            cfg.ladder_points = std::stoi(ladder_spec.substr(colon + 1));
        }

        RunResult r = run(command, cfg);

        std::string json_path, csv_path;
        if (!cfg.output.empty()) {
            std::filesystem::path p(cfg.output);
            if (p.extension() == ".csv") {
                csv_path = p.string();
                json_path = std::filesystem::path(p).replace_extension(".json").string();
            } else {
                json_path = p.string();
                csv_path = std::filesystem::path(p).replace_extension(".csv").string();
            }
            std::ofstream jf(json_path);
            if (!jf)
                throw ConfigError("cannot write " + json_path);
            jf << r.document.dump(2) << "\n";
            if (!r.csv_rows.empty())
                write_csv(csv_path, r);
        }

        if (as_json) {
            out << r.document.dump(2) << "\n";
        } else {
            out << command << ": " << (r.status == 0 ? "ok" : "FAILED") << "\n";
            out << r.document["results"].dump(2) << "\n";
            for (const auto& f : r.failures)
                out << "  failed: " << f << "\n";
        }
        return r.status;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        err << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) { // stod / stoi
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace cli
} // namespace qk
