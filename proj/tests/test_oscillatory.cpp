#include <doctest.h>

#include "qkinetic/oscillatory.hpp"
#include "qkinetic/quadrature.hpp"

#include <cmath>

using namespace qk;

namespace {

double pi4() { return std::pow(M_PI, 4); }

/// d = 1 s-integrand by brute force: nested trapezoid sums over (xi, x) and (eta, y).
cplx brute_integrand_1d(const ModelChi& chi, double s)
{
    auto g = [](const GaussianFactor& f, double z) {
        double c = f.center.dim() ? f.center[0] : 0.0;
        return f.amplitude * std::exp(-0.5 * (z - c) * (z - c) / (f.width * f.width));
    };
    const cplx i(0.0, 1.0);
    Rule r = trapezoid(241, -12.0, 12.0);
    cplx x1 = 0.0, k2 = 0.0;
    for (std::size_t a = 0; a < r.size(); ++a) {
        cplx fx = 0.0, fy = 0.0;
        for (std::size_t b = 0; b < r.size(); ++b) {
            fx += r.weights[b] * std::exp(i * r.nodes[a] * r.nodes[b]) * g(chi.gx, r.nodes[b]);
            fy += r.weights[b] * std::exp(-i * s * r.nodes[a] * r.nodes[b]) * g(chi.gy, r.nodes[b]);
        }
        x1 += r.weights[a] * g(chi.gxi, r.nodes[a]) * fx;
        k2 += r.weights[a] * g(chi.geta, r.nodes[a]) * fy;
    }
    return x1 * k2;
}

} // namespace

TEST_CASE("model integrand against brute-force Fourier transforms")
{
    ModelChi chi = ModelChi::standard(1);
    chi.gx.center = Vec{0.3};
    chi.gxi.center = Vec{-0.4};
    chi.gxi.width = 0.8;
    chi.gy.center = Vec{0.5};
    chi.gy.width = 1.3;
    chi.geta.center = Vec{0.2};
    for (double s : {0.0, 0.7, 2.5}) {
        cplx a = model_A_integrand(chi, s), b = brute_integrand_1d(chi, s);
        CHECK(std::abs(a - b) < 1e-8 * std::abs(b));
    }
    // separable and isotropic: d = 2 is the square of d = 1
    cplx one = model_A_integrand(ModelChi::standard(1), 1.3);
    CHECK(std::abs(model_A_integrand(ModelChi::standard(2), 1.3) - one * one) < 1e-10 * std::norm(one));
}

TEST_CASE("model integral closed forms for the standard Gaussian")
{
    // X1 = 2 pi^2, K2(s) = 4 pi^2 / (1 + s^2) in d = 2
    ModelChi chi = ModelChi::standard(2);
    for (double eps : {0.5, 0.1, 1e-3}) {
        double exact = 8.0 * pi4() * std::atan(1.0 / eps);
        CHECK(std::abs(model_A_eps(chi, eps) - exact) < 1e-9 * exact);
        CHECK(std::abs(model_A_eps(chi, eps)) <= model_A_bound(chi, eps));
    }
    CHECK(std::abs(model_A_limit(chi) - 4.0 * pi4() * M_PI) < 1e-9 * 4.0 * pi4() * M_PI);
    // d = 3: int_0^inf (1 + s^2)^{-3/2} ds = 1
    double d3 = 8.0 * std::sqrt(8.0) * std::pow(M_PI, 6);
    CHECK(std::abs(model_A_limit(ModelChi::standard(3)) - d3) < 1e-9 * d3);
    CHECK_THROWS_AS(model_A_limit(ModelChi::standard(1)), std::domain_error);
    CHECK_THROWS_AS(model_A_eps(chi, 0.0), std::invalid_argument);
}

TEST_CASE("model bound for small and large eps")
{
    ModelChi chi = ModelChi::standard(2);
    chi.gy.width = 0.6;
    chi.geta.center = Vec{0.4, 0.0};
    for (double eps : {2.0, 1.0, 0.1, 1e-2, 1e-4})
        CHECK(std::abs(model_A_eps(chi, eps)) <= model_A_bound(chi, eps));
    // eps >= 1: only the N_a part, scaled by 1/eps
    CHECK(model_A_bound(chi, 4.0) == doctest::Approx(0.5 * model_A_bound(chi, 2.0)));
}

TEST_CASE("term names and exponents")
{
    for (Term t : {Term::I1, Term::I2, Term::I3, Term::I4_case1, Term::I4_case2, Term::I4_case3, Term::I4_recollision,
                   Term::A_eps, Term::T_eps})
        CHECK(term_from_string(to_string(t)) == t);
    CHECK_THROWS_AS(term_from_string("I5"), std::invalid_argument);
    CHECK(expected_slope(Term::I1, 2) == 0.5);
    CHECK(expected_slope(Term::I2, 2) == 1.5);
    CHECK(expected_slope(Term::I3, 3) == 2.0);
    CHECK(expected_slope(Term::I4_recollision, 2) == 0.0);
    CHECK(default_sign_mode(Term::I1) == SignMode::summed);
    CHECK(default_sign_mode(Term::I3) == SignMode::branch);
    auto ladder = geometric_ladder(0.1, 0.5, 3);
    REQUIRE(ladder.size() == 3);
    CHECK(ladder[2] == doctest::Approx(0.025));
}

TEST_CASE("I terms vanish without a potential and converge in time nodes")
{
    auto f0 = InitialDatum::gaussian(2);
    CrossSection none(PotentialSpec::gaussian(0.0, 1.0, 2));
    for (Term t : {Term::I1, Term::I2, Term::I3, Term::I4_recollision})
        CHECK(std::abs(eval_I_term({t, 0, 2}, 0.1, f0, none).value) == 0.0);

    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 2));
    TermConfig cfg;
    cfg.signs = SignMode::branch;
    auto v = eval_I_term({Term::I2, 0, 2}, 0.05, f0, cs, cfg);
    CHECK(v.error < 1e-6 * std::abs(v.value));
    cfg.signs = SignMode::summed;
    auto s = eval_I_term({Term::I1, 0, 2}, 0.05, f0, cs, cfg);
    CHECK(std::abs(s.value.imag()) < 1e-10 * std::abs(s.value));
}

TEST_CASE("first order term scales as eps^(1/2) in two dimensions")
{
    auto f0 = InitialDatum::gaussian(2);
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 2));
    auto p = scaling_probe({Term::I1, 0, 2}, geometric_ladder(0.1, 1.0 / std::sqrt(10.0), 4), f0, cs);
    CHECK(p.slope == doctest::Approx(0.5).epsilon(0.1));
    CHECK(p.reliable);
}

TEST_CASE("finite eps history term against direct quadrature")
{
    auto f0 = InitialDatum::gaussian(1, 1.0, 1.0, Vec{0.2}, Vec{0.1});
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 1));
    TimeLadder times(1.0, {0.5});
    DirectConfig coarse;
    coarse.s_nodes = 8;
    coarse.k_step = 0.15;
    coarse.phase_points = 32;
    double direct = direct_T_eps_1d(times, 0.2, 0.3, 0.5, f0, cs, coarse);
    auto good = eval_T_eps_term(Graph({1}), times, 0.2, Vec{0.3}, Vec{0.5}, f0, cs);
    CHECK(std::abs(good.value - direct) < 1e-3 * std::abs(direct));

    TepsConfig mc;
    mc.method = SMethod::monte_carlo;
    mc.budget = {8000, 1, 0};
    auto m = eval_T_eps_term(Graph({1}), times, 0.2, Vec{0.3}, Vec{0.5}, f0, cs, mc);
    CHECK(std::abs(m.value - good.value) < 4.0 * m.stderr_);

    CrossSection none(PotentialSpec::gaussian(0.0, 1.0, 1));
    CHECK(eval_T_eps_term(Graph({1}), times, 0.2, Vec{0.3}, Vec{0.5}, f0, none).value == 0.0);
    CHECK(direct_T_eps_1d(times, 0.2, 0.3, 0.5, f0, none) == 0.0);
    TimeLadder empty(0.8, {});
    CHECK(eval_T_eps_term(Graph(), empty, 0.2, Vec{0.3}, Vec{0.5}, f0, cs).value == f0(Vec{0.3 - 0.8 * 0.5}, Vec{0.5}));
}

TEST_CASE("order one Fourier weight against a plane quadrature")
{
    // d = 1, n = 1: int |phi_hat(k)| exp(-xi^2 / 2 - (s k - t xi)^2 / 2) dxi dk
    auto f0 = InitialDatum::gaussian(1);
    CrossSection cs(PotentialSpec::gaussian(1.0, 0.8, 1));
    double t = 0.6, s = 3.0;
    Rule r = trapezoid(401, -10.0, 10.0);
    double quad = 0.0;
    for (std::size_t a = 0; a < r.size(); ++a)
        for (std::size_t b = 0; b < r.size(); ++b) {
            double xi = r.nodes[a], k = r.nodes[b];
            double phi = std::sqrt(2.0 * M_PI) * 0.8 * std::exp(-0.32 * k * k);
            quad += r.weights[a] * r.weights[b] * phi * std::exp(-0.5 * xi * xi - 0.5 * (s * k - t * xi) * (s * k - t * xi));
        }
    CHECK(g_integral(Graph({1}), TimeLadder(1.0, {t}), {s}, f0, cs) == doctest::Approx(quad).epsilon(1e-9));
    CHECK_THROWS_AS(g_integral(Graph({1}), TimeLadder(1.0, {t}), {s}, InitialDatum::homogeneous_gaussian(1), cs),
                    std::invalid_argument);
}

TEST_CASE("uniform envelope and decay")
{
    auto f0 = InitialDatum::gaussian(2, 1.0, 0.8);
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 2));
    std::vector<std::vector<double>> pts;
    for (double s : {0.0, 1.0, 10.0, 100.0, 1000.0})
        pts.push_back({s});
    auto r = uniform_bound_check(Graph({1}), TimeLadder(1.0, {0.6}), pts, f0, cs);
    CHECK(r.ok);
    CHECK(r.observed_constant <= r.constant);
    CHECK(r.decay_slope == doctest::Approx(-2.0).epsilon(0.05));

    std::vector<std::vector<double>> pts2{{0.0, 0.0}, {5.0, 0.5}, {50.0, 40.0}};
    CHECK(uniform_bound_check(Graph({1, 2}), TimeLadder(1.0, {0.6, 0.3}), pts2, f0, cs).ok);
}

TEST_CASE("mollified delta recovers pi g(0)")
{
    auto rep = mollified_delta_check({5.0, 10.0, 100.0, 1000.0});
    double target = M_PI / std::sqrt(2.0 * M_PI);
    for (const auto& row : rep.rows) {
        CHECK(row.value == doctest::Approx(target).epsilon(1e-5));
        CHECK(row.fourier == doctest::Approx(row.value).epsilon(1e-9));
    }
    CHECK(std::abs(rep.odd_value) < 1e-12);
    CHECK(rep.halving);
}
