#include <doctest.h>

#include "qkinetic/quadrature.hpp"
#include "qkinetic/spectral.hpp"

#include <cmath>

using namespace qk;

TEST_CASE("gaussian potential transform")
{
    auto phi = PotentialSpec::gaussian(1.0, 1.0, 3);
    CHECK(phi.fourier(Vec::zero(3)) == doctest::Approx(15.749609945722419));
    auto phi1 = PotentialSpec::gaussian(1.0, 1.0, 1);
    CHECK(phi1.fourier(Vec{1.0}) == doctest::Approx(1.5203469010662807));
    CHECK(phi1.fourier_l1() == doctest::Approx(2.0 * M_PI));
    CHECK(phi1.fourier_sup() == doctest::Approx(std::sqrt(2.0 * M_PI)));
}

TEST_CASE("potential transform matches quadrature in one dimension")
{
    PotentialSpec phi(1, {{1.5, 0.7}, {-0.4, 1.3}});
    Rule r = trapezoid(801, -15.0, 15.0);
    for (double h : {0.0, 0.8, 2.5}) {
        double q = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i)
            q += r.weights[i] * phi(Vec{r.nodes[i]}) * std::cos(h * r.nodes[i]);
        CHECK(phi.fourier(Vec{h}) == doctest::Approx(q).epsilon(1e-12));
        CHECK(std::exp(phi.log_fourier_bump(0, Vec{h})).real() + std::exp(phi.log_fourier_bump(1, Vec{h})).real() ==
              doctest::Approx(q).epsilon(1e-12));
    }
}

TEST_CASE("datum transform at the origin is the mass")
{
    auto f = InitialDatum::gaussian(3, 0.8, 1.3, Vec{1.0, 0.0, -2.0}, Vec{0.5, 0.5, 0.0});
    auto z = f.fourier(Vec::zero(3), Vec::zero(3));
    CHECK(z.real() == doctest::Approx(1.0));
    CHECK(z.imag() == doctest::Approx(0.0));
}

TEST_CASE("closed-form norms")
{
    auto f3 = InitialDatum::gaussian(3);
    auto n3 = f3.norms();
    CHECK(n3.n1 == doctest::Approx(248.05021344239853));
    CHECK(n3.n2 == doctest::Approx(15.749609945722419));
    CHECK(n3.exact);

    auto f1 = InitialDatum::gaussian(1);
    CHECK(f1.norms().n2 == doctest::Approx(2.5066282746310002));
}

TEST_CASE("closed-form norms agree with quadrature")
{
    DatumComponent a, b;
    a.weight = 0.6;
    a.sx = Vec{0.9, 1.2};
    a.sv = Vec{0.7, 1.0};
    b.weight = 0.4;
    b.sx = Vec{1.5, 0.6};
    b.sv = Vec{1.1, 0.8};
    InitialDatum f(2, {a, b});
    auto closed = f.norms();
    auto quad = norms_by_quadrature(f, 64);
    CHECK(closed.exact);
    CHECK(quad.n1 == doctest::Approx(closed.n1).epsilon(1e-6));
    CHECK(quad.n2 == doctest::Approx(closed.n2).epsilon(1e-6));

    // Shifted components: the closed form is only an upper bound.
    b.x0 = Vec{2.0, 0.0};
    InitialDatum g(2, {a, b});
    auto bound = g.norms();
    CHECK_FALSE(bound.exact);
    CHECK(norms_by_quadrature(g, 64).n1 <= bound.n1 * (1.0 + 1e-9));
}

TEST_CASE("shift theorem")
{
    auto centered = InitialDatum::gaussian(2, 1.1, 0.9);
    Vec x0{0.3, -1.2}, v0{2.0, 0.4};
    auto shifted = InitialDatum::gaussian(2, 1.1, 0.9, x0, v0);
    Vec xi{0.7, -0.2}, k{-0.5, 1.1};
    cplx phase = std::exp(cplx(0.0, -(dot(xi, x0) + dot(k, v0))));
    auto lhs = shifted.fourier(xi, k);
    auto rhs = phase * centered.fourier(xi, k);
    CHECK(std::abs(lhs - rhs) < 1e-14);
}

TEST_CASE("fourier inversion recovers the density in one dimension")
{
    auto f = InitialDatum::gaussian(1, 0.8, 1.2, Vec{0.4}, Vec{-0.3});
    Vec x{0.9}, v{0.1};
    Rule rx = trapezoid(161, -14.0, 14.0), rk = trapezoid(161, -10.0, 10.0);
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < rx.size(); ++i)
        for (std::size_t j = 0; j < rk.size(); ++j) {
            Vec xi{rx.nodes[i]}, k{rk.nodes[j]};
            s += rx.weights[i] * rk.weights[j] * f.fourier(xi, k) *
                 std::exp(cplx(0.0, xi[0] * x[0] + k[0] * v[0]));
        }
    s /= 4.0 * M_PI * M_PI;
    CHECK(s.real() == doctest::Approx(f(x, v)).epsilon(1e-10));
    CHECK(std::abs(s.imag()) < 1e-12);
}

TEST_CASE("factorized transform and homogeneous data")
{
    auto f = InitialDatum::gaussian(1);
    auto p = factorized_datum_fourier(f, {Vec{0.5}, Vec{1.0}}, {Vec{0.0}, Vec{0.2}});
    CHECK(p.real() == doctest::Approx(f.fourier(Vec{0.5}, Vec{0.0}).real() * f.fourier(Vec{1.0}, Vec{0.2}).real()));

    auto h = InitialDatum::homogeneous_gaussian(3, 1.0);
    CHECK_THROWS(h.fourier(Vec::zero(3), Vec::zero(3)));
    CHECK(h.velocity_fourier(Vec::zero(3)).real() == doctest::Approx(1.0));
    CHECK(h.norms().n2 == doctest::Approx(1.0));
    CHECK(h.norms().n1 == doctest::Approx(std::pow(2.0 * M_PI, 1.5)));
}

TEST_CASE("invalid inputs are rejected")
{
    CHECK_THROWS_AS(PotentialSpec(4, {{1.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PotentialSpec(2, {{1.0, 0.0}}), std::invalid_argument);
    DatumComponent c;
    c.weight = -1.0;
    CHECK_THROWS_AS(InitialDatum(2, {c}), std::invalid_argument);
}
