#include <doctest.h>

#include "qkinetic/quadrature.hpp"
#include "qkinetic/series.hpp"

#include <cmath>

using namespace qk;

namespace {

InitialDatum bimodal_homogeneous()
{
    DatumComponent a{0.5, Vec::zero(3), Vec{0.9, 0.0, 0.0}, Vec{1.0, 1.0, 1.0}, Vec{0.7, 1.0, 1.0}};
    DatumComponent b{0.5, Vec::zero(3), Vec{-0.9, 0.0, 0.0}, Vec{1.0, 1.0, 1.0}, Vec{0.7, 1.0, 1.0}};
    return InitialDatum(3, {a, b}, true);
}

} // namespace

TEST_CASE("free flight and zero potential")
{
    auto f0 = InitialDatum::gaussian(2, 1.0, 0.8, Vec{0.2, 0.0}, Vec{0.1, -0.3});
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 2));
    Vec x1{0.3, -0.2}, v1{0.5, 0.4};
    TimeLadder empty(0.7, {});
    auto e = eval_T_limit(Graph(), empty, x1, v1, f0, cs, {});
    CHECK(e.value == f0(x1 - 0.7 * v1, v1));
    CHECK(e.stderr_ == 0.0);

    CrossSection none(PotentialSpec::gaussian(0.0, 1.0, 2));
    SeriesConfig cfg;
    cfg.t = 0.7;
    cfg.budget = 1000;
    auto r = boltzmann_series(x1, v1, cfg, f0, none);
    REQUIRE(r.orders.size() == 4);
    CHECK(r.total.value == f0(x1 - 0.7 * v1, v1));
    for (int n = 1; n <= 3; ++n)
        CHECK(r.orders[n].value.value == 0.0);
    CHECK(r.orders[3].graphs == 6);
}

TEST_CASE("first order term against a velocity and angle quadrature")
{
    DatumComponent comp{1.0, Vec{0.1, 0.0}, Vec{0.4, -0.2}, Vec{1.0, 1.3}, Vec{0.6, 1.2}};
    InitialDatum f0(2, {comp});
    CrossSection cs(PotentialSpec::gaussian(1.0, 0.8, 2));
    Vec x1{0.2, -0.1}, v1{0.5, 0.3};
    double t = 0.8, t1 = 0.35;
    TimeLadder times(t, {t1});
    auto mc = eval_T_limit(Graph({1}), times, x1, v1, f0, cs, {1u << 19, 3, 0});

    // particle 2 is born at t1 where particle 1 sits; sigma = -1 leaves both unchanged
    Vec at = x1 - (t - t1) * v1;
    Rule rv = trapezoid(97, -8.0, 8.0);
    int n_theta = 96;
    double quad = 0.0;
    for (std::size_t a = 0; a < rv.size(); ++a)
        for (std::size_t b = 0; b < rv.size(); ++b) {
            Vec v2{rv.nodes[a], rv.nodes[b]};
            double wv = rv.weights[a] * rv.weights[b];
            double loss = f0(at - t1 * v1, v1) * f0(at - t1 * v2, v2);
            for (int k = 0; k < n_theta; ++k) {
                double th = 2.0 * M_PI * k / n_theta;
                Vec om{std::cos(th), std::sin(th)};
                Vec w = v1 - v2;
                Vec dv = dot(om, w) * om;
                Vec u1 = v1 - dv, u2 = v2 + dv;
                double gain = f0(at - t1 * u1, u1) * f0(at - t1 * u2, u2);
                quad += wv * (2.0 * M_PI / n_theta) * cs(om, w) * (gain - loss);
            }
        }
    CHECK(std::abs(mc.value - quad) < 0.01 * std::abs(quad));
    CHECK(std::abs(mc.value - quad) < 4.0 * mc.stderr_);
}

TEST_CASE("series orders integrate over the time simplex")
{
    auto f0 = InitialDatum::gaussian(2, 1.0, 0.8, Vec{0.2, 0.0}, Vec{0.1, -0.3});
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 2));
    Vec x1{0.3, -0.2}, v1{0.5, 0.4};
    SeriesConfig cfg;
    cfg.t = 0.6;
    cfg.n_max = 1;
    cfg.budget = 400000;
    auto r = boltzmann_series(x1, v1, cfg, f0, cs);

    Rule rule = gauss_legendre(8, 0.0, cfg.t);
    Estimate direct;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        TimeLadder times(cfg.t, {rule.nodes[i]});
        direct = direct + eval_T_limit(Graph({1}), times, x1, v1, f0, cs, {100000, 5, i}) * rule.weights[i];
    }
    double se = std::hypot(r.orders[1].value.stderr_, direct.stderr_);
    CHECK(std::abs(r.orders[1].value.value - direct.value) < 4.0 * se);
}

TEST_CASE("convergence radius and truncation")
{
    Norms n{3.0, 1.0, true};
    CHECK(convergence_radius(n, 1.0) == doctest::Approx(0.25));
    CHECK(convergence_radius(n, 2.0) == doctest::Approx(0.125));
    CHECK_THROWS_AS(convergence_radius(n, 0.0), std::invalid_argument);
    CHECK(geometric_tail(0.5, 3) == doctest::Approx(0.125));
    CHECK(std::isinf(geometric_tail(1.0, 3)));

    auto f0 = InitialDatum::gaussian(2);
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 2));
    SeriesConfig cfg;
    cfg.c_hat = 1.0;
    cfg.t = 2.0 * convergence_radius(f0.norms(), 1.0);
    CHECK_THROWS_AS(boltzmann_series(Vec{0.0, 0.0}, Vec{0.0, 0.0}, cfg, f0, cs), std::invalid_argument);

    std::vector<SeriesOrder> orders{{0, 1, {1.0, 0.0}}, {1, 1, {0.5, 0.0}}, {2, 2, {-0.09, 0.0}}};
    double c = calibrate_growth_constant(orders, n, 0.5);
    CHECK(c == doctest::Approx(0.25)); // 0.5 / (4 * 0.5)
}

TEST_CASE("Picard oracle basics")
{
    auto f0 = bimodal_homogeneous();
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 3));
    Vec v1{0.3, 0.2, 0.0};
    PicardConfig cfg;
    cfg.grid = 9;
    cfg.node_samples = 500;
    cfg.final_samples = 100000;

    cfg.iterations = 0;
    CHECK(picard_oracle(v1, 0.3, f0, cs, cfg).value == f0.velocity_density(v1));
    cfg.iterations = 3;
    CrossSection none(PotentialSpec::gaussian(0.0, 1.0, 3));
    CHECK(picard_oracle(v1, 0.3, f0, none, cfg).value == f0.velocity_density(v1));
    CHECK_THROWS_AS(picard_oracle(v1, 0.3, InitialDatum::gaussian(3), cs, cfg), std::invalid_argument);

    // one iteration is f0 + t Q(f0, f0), the first two series orders
    cfg.iterations = 1;
    double t = 0.3;
    auto p = picard_oracle(v1, t, f0, cs, cfg);
    SeriesConfig sc;
    sc.t = t;
    sc.n_max = 1;
    sc.budget = 100000;
    auto s = boltzmann_series(Vec::zero(3), v1, sc, f0, cs);
    CHECK(std::abs(p.value - s.total.value) < 4.0 * std::hypot(p.stderr_, s.total.stderr_));
}

TEST_CASE("Maxwellian is stationary under Picard iteration")
{
    auto m = InitialDatum::homogeneous_gaussian(3, 1.0);
    CrossSection cs(PotentialSpec::gaussian(1.0, 1.0, 3));
    PicardConfig cfg;
    cfg.iterations = 2;
    cfg.grid = 9;
    cfg.node_samples = 1000;
    cfg.final_samples = 50000;
    Vec v1{0.4, -0.3, 0.2};
    auto p = picard_oracle(v1, 0.4, m, cs, cfg);
    double f = m.velocity_density(v1);
    CHECK(std::abs(p.value - f) < 4.0 * p.stderr_ + 1e-3 * f);
}
