#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace alphaode;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("solution coefficients of y' = exp(x) are 1/m! at the origin") {
    Fixture f = make_example1();
    TaylorExpansion te = ode_taylor_coeffs(f.system, f.initial, 12);
    CHECK(te.coeff(0, 0) == 1.0);
    double fact = 1.0;
    for (std::size_t m = 1; m <= 12; ++m) {
        fact *= static_cast<double>(m);
        CHECK_THAT(te.coeff(0, m), WithinRel(1.0 / fact, 1e-13));
    }
    // d_f(k, j) rescales to the total derivatives of f, all equal to 1 here
    for (std::size_t j = 0; j <= 11; ++j) CHECK_THAT(te.d_f(0, j), WithinRel(1.0, 1e-12));
}

TEST_CASE("solution coefficients of y' = y^2 from y(0) = 1 are all 1") {
    Fixture f = make_example2();
    TaylorExpansion te = ode_taylor_coeffs(f.system, f.initial, 12);
    for (std::size_t m = 0; m <= 12; ++m) CHECK_THAT(te.coeff(0, m), WithinRel(1.0, 1e-13));
}

TEST_CASE("oscillator derivative ladder alternates as (-1)^k w^{2k}") {
    const double w = 2.0, y10 = 0.3, y20 = -0.7;
    Fixture f = make_example4(w, y10, y20);
    TaylorExpansion te = ode_taylor_coeffs(f.system, State{0.0, {y10, y20}}, 13);
    // D^{2j} f1 = (-1)^j w^{2j} y2, D^{2j+1} f1 = (-1)^{j+1} w^{2j+2} y1
    for (std::size_t j = 0; j <= 5; ++j) {
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        double w2j = std::pow(w, 2.0 * static_cast<double>(j));
        CHECK_THAT(te.d_f(0, 2 * j), WithinAbs(sign * w2j * y20, 1e-13 * w2j));
        CHECK_THAT(te.d_f(0, 2 * j + 1), WithinAbs(-sign * w2j * w * w * y10,
                                                   1e-13 * w2j * w * w));
    }
}

TEST_CASE("leading invariants: c0 is the state, c1 the right-hand side") {
    std::mt19937 rng(31);
    for (int i = 0; i < 30; ++i) {
        std::size_t n = 0;
        OdeSystem sys = alphaode::testing::random_polynomial_system(rng, n);
        State s = alphaode::testing::random_state(rng, n);
        TaylorExpansion te = ode_taylor_coeffs(sys, s, 6);
        std::vector<double> f = sys.eval_rhs(s);
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(te.coeff(k, 0) == s.y[k]);
            CHECK_THAT(te.coeff(k, 1), WithinAbs(f[k], 1e-15 * std::max(1.0, std::abs(f[k]))));
            CHECK_THAT(te.d_f(k, 0), WithinAbs(f[k], 1e-15 * std::max(1.0, std::abs(f[k]))));
        }
    }
}

TEST_CASE("expansion point shift is consistent with a fine reference") {
    Fixture f = make_example5(0.1);
    State s0{0.2, {1.7, 1.1}};
    TaylorExpansion te = ode_taylor_coeffs(f.system, s0, 15);
    const double dx = 0.1;
    ReferenceRun ref = reference_solve(f.system, s0, s0.x + dx, 1e-4, {s0.x + dx});
    for (std::size_t k = 0; k < 2; ++k)
        CHECK_THAT(te.evaluate(k, dx), WithinAbs(ref.trajectory[0].y[k], 1e-10));
}

TEST_CASE("tail estimate tracks the last retained terms") {
    Fixture f = make_example2();  // c_m = 1 for every m
    TaylorExpansion te = ode_taylor_coeffs(f.system, f.initial, 9);

    TailEstimate small = series_tail_estimate(te, 0.5);
    CHECK_THAT(small.tail[0], WithinRel(std::pow(0.5, 8), 1e-12));
    CHECK(!small.any_divergent());

    TailEstimate big = series_tail_estimate(te, 1.2);
    CHECK(big.any_divergent());
    CHECK(big.max_tail() >= 1.0);

    // |dx| = 1 is the knife edge: flat terms count as non-decreasing
    CHECK(series_tail_estimate(te, 1.0).any_divergent());
}

TEST_CASE("tail of a constant field is zero and never flagged") {
    OdeSystem sys = build_system({Expr::constant(3.0)}, 1);
    TaylorExpansion te = ode_taylor_coeffs(sys, State{0.0, {1.0}}, 9);
    TailEstimate est = series_tail_estimate(te, 0.7);
    CHECK(est.tail[0] == 0.0);
    CHECK(!est.any_divergent());
}

TEST_CASE("degree guards") {
    Fixture f = make_example1();
    CHECK_THROWS_AS(ode_taylor_coeffs(f.system, f.initial, 0), InvalidConfig);
    TaylorExpansion te = ode_taylor_coeffs(f.system, f.initial, 2);
    CHECK_THROWS_AS(series_tail_estimate(te, 0.1), InvalidConfig);
    CHECK_THROWS_AS(ode_taylor_coeffs(f.system, State{0.0, {1.0, 2.0}}, 4), DimensionMismatch);
}

TEST_CASE("jet recursion reproduces the hand-derived van der Pol ladder") {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> ydist(-2.0, 2.0);
    std::uniform_real_distribution<double> mudist(0.01, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        double y1 = ydist(rng), y2 = ydist(rng), mu = mudist(rng);
        Fixture f = make_example5(mu);
        TaylorExpansion te = ode_taylor_coeffs(f.system, State{0.0, {y1, y2}}, 9);
        for (int k = 1; k <= 7; ++k) {
            double hand = vdp_hand_derivative(y1, y2, mu, k);
            double jet = te.d_f(0, static_cast<std::size_t>(k));
            CHECK(std::abs(jet - hand) <= 1e-10 * std::max(1.0, std::abs(hand)));
        }
    }
    CHECK_THROWS_AS(vdp_hand_derivative(1.0, 1.0, 0.1, 8), UnsupportedFixture);
}
