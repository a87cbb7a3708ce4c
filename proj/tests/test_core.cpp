#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "susyell/constants.hpp"
#include "susyell/grid.hpp"
#include "susyell/potential.hpp"
#include "susyell/quadrature.hpp"
#include "susyell/radial_function.hpp"

using namespace susyell;

TEST_CASE("make_grid construction") {
    radial_grid g = make_grid(20.0, 2001);
    CHECK(g.n_points() == 2001);
    CHECK(g.h() == Catch::Approx(20.0 / 2001).epsilon(1e-15));
    CHECK(g.r_min() == g.h());
    CHECK(g.r(2000) == g.r_max());
    CHECK(g.r_max() == Catch::Approx(20.0).epsilon(1e-15));

    radial_grid tiny = make_grid(1.0, 3);
    std::vector<double> nodes = tiny.nodes();
    REQUIRE(nodes.size() == 3);
    CHECK(nodes[0] == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(nodes[1] == Catch::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(nodes[2] == Catch::Approx(1.0).epsilon(1e-15));

    // spacing equals (r_max - r_min)/(n-1) by construction
    CHECK(g.h() == Catch::Approx((g.r_max() - g.r_min()) / (g.n_points() - 1)).epsilon(1e-13));
}

TEST_CASE("make_grid rejects bad arguments") {
    CHECK_THROWS_AS(make_grid(10.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(10.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-1.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0.0, 100), std::invalid_argument);
}

TEST_CASE("constants cache kappa") {
    constants c;
    CHECK(std::abs(c.kappa * c.kappa * 2.0 * c.mass - c.hbar * c.hbar) <= 4e-16);
    constants c2(2.0, 3.0);
    CHECK(c2.kappa == Catch::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-15));
    CHECK(std::abs(c2.kappa * c2.kappa * 2.0 * c2.mass - c2.hbar * c2.hbar) <= 1e-15 * c2.hbar * c2.hbar * 4.0);
    CHECK_THROWS_AS(constants(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(constants(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("sampled radial_function reproduces node values and interpolates") {
    radial_grid g = make_grid(10.0, 101);
    radial_function f = radial_function::closed_form([](double r) { return std::exp(-r) * r; });
    radial_function s = radial_function::sample_on(g, f);
    for (int i = 0; i < g.n_points(); i += 7)
        CHECK(s(g.r(i)) == f(g.r(i)));
    // midpoint: linear interpolation between neighbours
    double rm = 0.5 * (g.r(10) + g.r(11));
    CHECK(s(rm) == Catch::Approx(0.5 * (f(g.r(10)) + f(g.r(11)))).epsilon(1e-14));
    CHECK_THROWS_AS(s(g.r_min() / 2.0), std::domain_error);
    CHECK_THROWS_AS(s(g.r_max() + 1.0), std::domain_error);
    CHECK_THROWS_AS(f(-1.0), std::domain_error);
    CHECK_THROWS_AS(f(0.0), std::domain_error);
}

TEST_CASE("quadrature integrates constants and linears") {
    radial_grid g = make_grid(10.0, 1001);
    std::vector<double> ones(g.n_points(), 1.0);
    CHECK(quadrature(ones, g) == Catch::Approx(10.0 - g.h()).epsilon(1e-12));

    radial_grid g2 = make_grid(2.0, 1001);
    radial_function lin = radial_function::closed_form([](double r) { return r; });
    double h = g2.h();
    CHECK(quadrature(lin, g2) == Catch::Approx(0.5 * (4.0 - h * h)).epsilon(1e-10));
}

TEST_CASE("quadrature is exact for cubics on even interval counts") {
    std::mt19937 rng(20260817);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int trial = 0; trial < 8; ++trial) {
        double a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng);
        int n = 101 + 2 * (trial * 37 % 200); // odd n -> even interval count
        radial_grid g = make_grid(5.0 + trial, n);
        radial_function p = radial_function::closed_form(
            [=](double r) { return a + r * (b + r * (c + r * d)); });
        auto antider = [=](double r) {
            return r * (a + r * (b / 2 + r * (c / 3 + r * d / 4)));
        };
        double exact = antider(g.r_max()) - antider(g.r_min());
        double got = quadrature(p, g);
        CHECK(std::abs(got - exact) <= 1e-12 * (std::abs(exact) + 1.0));
    }
}

TEST_CASE("quadrature of the hydrogen ground density") {
    // f = 4 r^2 e^{-2r}: full-line integral is 1; the grid starts at r_min = h,
    // so the target is the truncated value from the exact antiderivative.
    radial_grid g = make_grid(40.0, 8001);
    radial_function f =
        radial_function::closed_form([](double r) { return 4.0 * r * r * std::exp(-2.0 * r); });
    auto tail = [](double r) { return std::exp(-2.0 * r) * (2.0 * r * r + 2.0 * r + 1.0); };
    double truncated = tail(g.r_min()) - tail(g.r_max());
    double got = quadrature(f, g);
    CHECK(std::abs(got - truncated) < 1e-8);
    CHECK(std::abs(got - 1.0) < 2e-7); // the [0,h] strip is (4/3)h^3 ~ 1.7e-7
}

TEST_CASE("quadrature rejects mismatched samples") {
    radial_grid g = make_grid(1.0, 11);
    std::vector<double> wrong(10, 1.0);
    CHECK_THROWS_AS(quadrature(wrong, g), std::invalid_argument);
}

TEST_CASE("cumulative_simpson tracks an analytic antiderivative") {
    radial_grid g = make_grid(10.0, 1000);
    std::vector<double> f(g.n_points());
    for (int i = 0; i < g.n_points(); ++i) f[i] = std::exp(-g.r(i));
    std::vector<double> c = cumulative_simpson(f, g);
    double worst = 0.0;
    for (int i = 0; i < g.n_points(); ++i) {
        double exact = std::exp(-g.r_min()) - std::exp(-g.r(i));
        worst = std::max(worst, std::abs(c[i] - exact));
    }
    CHECK(worst < 2e-9);

    std::vector<double> rb = cumulative_simpson_backward(f, g);
    double worst_b = 0.0;
    for (int i = 0; i < g.n_points(); ++i) {
        double exact = std::exp(-g.r(i)) - std::exp(-g.r_max());
        worst_b = std::max(worst_b, std::abs(rb[i] - exact));
    }
    CHECK(worst_b < 2e-9);
}

TEST_CASE("adaptive_simpson resolves an integrable spike") {
    double got = adaptive_simpson([](double r) { return 1.0 / r; }, 0.01, 1.0, 1e-13);
    CHECK(got == Catch::Approx(std::log(100.0)).epsilon(1e-10));
    double rev = adaptive_simpson([](double r) { return 1.0 / r; }, 1.0, 0.01, 1e-13);
    CHECK(rev == Catch::Approx(-std::log(100.0)).epsilon(1e-10));
}

TEST_CASE("potential families validate parameters") {
    CHECK_THROWS_AS(potential_family::harmonic(0.0), std::invalid_argument);
    CHECK_THROWS_AS(potential_family::coulomb(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(potential_family::hulthen(-0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(potential_family::greene_aldrich(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("potential_v0 spot values") {
    constants c;
    CHECK(potential_v0(potential_family::harmonic(1.0), 2.0, c) == Catch::Approx(2.0));
    CHECK(potential_v0(potential_family::coulomb(1.0), 2.0, c) == Catch::Approx(-0.5));
    // screened potential approaches -e2/r + e2*alpha/2 at small r
    potential_family h = potential_family::hulthen(0.1, 1.0);
    CHECK(potential_v0(h, 1e-6, c) == Catch::Approx(-1e6 + 0.05).epsilon(1e-9));
    CHECK(h.beta(c) == Catch::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("screened barrier tends to the centrifugal shape as alpha -> 0") {
    constants c;
    potential_family h = potential_family::hulthen(1e-6, 1.0);
    potential_family cf = potential_family::coulomb(1.0);
    for (double r : {0.5, 1.0, 3.0, 7.0}) {
        double a = barrier_shape(h, r, c);
        double b = barrier_shape(cf, r, c);
        CHECK(a == Catch::Approx(b).epsilon(1e-5));
    }
}

TEST_CASE("effective-potential rearrangement equals the screened family") {
    constants c;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> adist(0.05, 1.0);
    std::uniform_real_distribution<double> rdist(0.01, 25.0);
    for (int trial = 0; trial < 200; ++trial) {
        double alpha = adist(rng);
        double r = rdist(rng);
        int ell = trial % 5;
        potential_family hu = potential_family::hulthen(alpha, 1.0);
        potential_family ga = potential_family::greene_aldrich(alpha, 1.0);
        double a = full_potential(hu, ell, r, c);
        double b = full_potential(ga, ell, r, c);
        CHECK(std::abs(a - b) <= 1e-12 * (std::abs(a) + std::abs(b)) + 1e-15);
    }
}

TEST_CASE("family names round-trip") {
    for (family_kind k : {family_kind::harmonic_oscillator, family_kind::coulomb,
                          family_kind::hulthen, family_kind::greene_aldrich_effective}) {
        auto back = family_from_name(family_name(k));
        REQUIRE(back.has_value());
        CHECK(*back == k);
    }
    CHECK(!family_from_name("morse").has_value());
}
