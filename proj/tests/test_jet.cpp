#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace alphaode;
using alphaode::testing::ulp_diff;
using Catch::Matchers::WithinAbs;

namespace {

Jet random_jet(std::mt19937& rng, std::size_t order, double lead_min = -1.0) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Jet j(order);
    for (std::size_t m = 0; m <= order; ++m) j[m] = dist(rng);
    if (j[0] < lead_min) j[0] = lead_min + std::abs(j[0]);
    return j;
}

void check_close(const Jet& a, const Jet& b, double tol) {
    REQUIRE(a.order() == b.order());
    for (std::size_t m = 0; m <= a.order(); ++m)
        CHECK_THAT(a[m], WithinAbs(b[m], tol * std::max(1.0, std::abs(b[m]))));
}

}  // namespace

TEST_CASE("exp of the expansion variable gives 1/m!") {
    Jet t = Jet::variable(0.0, 8);
    Jet e = exp(t);
    double fact = 1.0;
    for (std::size_t m = 0; m <= 8; ++m) {
        if (m > 0) fact *= static_cast<double>(m);
        CHECK_THAT(e[m], WithinAbs(1.0 / fact, 1e-15));
    }
}

TEST_CASE("products truncate the Cauchy convolution") {
    Jet a = Jet::variable(1.0, 3);  // 1 + t
    Jet sq = a * a;
    CHECK(sq[0] == 1.0);
    CHECK(sq[1] == 2.0);
    CHECK(sq[2] == 1.0);
    CHECK(sq[3] == 0.0);
    check_close(pow_int(a, 2), sq, 0.0);
}

TEST_CASE("sin and cos coefficients of omega t") {
    const double w = 2.0;
    Jet a = Jet::variable(0.0, 5) * w;
    Jet s = sin(a), c = cos(a);
    CHECK_THAT(s[0], WithinAbs(0.0, 1e-16));
    CHECK_THAT(s[1], WithinAbs(w, 1e-15));
    CHECK_THAT(s[2], WithinAbs(0.0, 1e-16));
    CHECK_THAT(s[3], WithinAbs(-w * w * w / 6.0, 1e-14));
    CHECK_THAT(c[0], WithinAbs(1.0, 1e-16));
    CHECK_THAT(c[2], WithinAbs(-w * w / 2.0, 1e-14));
    CHECK_THAT(c[4], WithinAbs(w * w * w * w / 24.0, 1e-13));
}

TEST_CASE("elementary identities hold coefficient-wise") {
    std::mt19937 rng(99);
    for (int i = 0; i < 50; ++i) {
        Jet a = random_jet(rng, 10);
        a[0] = 0.4 + std::abs(a[0]);  // keep log/sqrt/tan in range

        check_close(log(exp(a)), a, 1e-13);
        check_close(exp(log(a)), a, 1e-13);
        Jet r = checked_sqrt(a);
        check_close(r * r, a, 1e-13);
        check_close(pow_real(a, 0.5), r, 1e-13);
        check_close(pow_real(a, 2.0), a * a, 1e-12);
        check_close(tan(a), sin(a) / cos(a), 1e-12);

        Jet b = random_jet(rng, 10);
        b[0] = 0.5 + std::abs(b[0]);
        check_close((a * b) / b, a, 1e-12);
    }
}

TEST_CASE("tanh matches its exponential definition") {
    std::mt19937 rng(17);
    for (int i = 0; i < 20; ++i) {
        Jet a = random_jet(rng, 8);
        Jet e2 = exp(2.0 * a);
        check_close(tanh(a), (e2 - 1.0) / (e2 + 1.0), 1e-12);
    }
}

TEST_CASE("multiplication is commutative and near-associative") {
    // the convolutions accumulate in different orders, so equality only holds
    // up to roundoff scaled by the magnitude of the summed terms
    const double eps = std::numeric_limits<double>::epsilon();
    auto mass = [](const Jet& j) {
        double s = 0.0;
        for (std::size_t m = 0; m <= j.order(); ++m) s += std::abs(j[m]);
        return s;
    };
    std::mt19937 rng(123);
    for (int i = 0; i < 100; ++i) {
        Jet a = random_jet(rng, 8), b = random_jet(rng, 8), c = random_jet(rng, 8);
        double scale2 = mass(a) * mass(b);
        Jet ab = a * b, ba = b * a;
        for (std::size_t m = 0; m <= 8; ++m)
            CHECK(std::abs(ab[m] - ba[m]) <= 16.0 * eps * scale2);
        double scale3 = scale2 * mass(c);
        Jet l = (a * b) * c, r = a * (b * c);
        for (std::size_t m = 0; m <= 8; ++m)
            CHECK(std::abs(l[m] - r[m]) <= 64.0 * eps * scale3);
    }
}

TEST_CASE("domain guards on singular leading coefficients") {
    Jet z(4);  // identically zero
    Jet one = Jet::constant(1.0, 4);
    CHECK_THROWS_AS(one / z, DomainError);
    CHECK_THROWS_AS(log(z), DomainError);
    CHECK_THROWS_AS(checked_sqrt(Jet::constant(-1.0, 4)), DomainError);
    CHECK_THROWS_AS(pow_real(z, 0.5), DomainError);
    CHECK_THROWS_AS(pow_int(z, -1), DomainError);
    CHECK_NOTHROW(pow_int(z, 3));
}

TEST_CASE("generic expression evaluation over jets matches the scalar path") {
    // evaluate a nontrivial tree at a jet whose value slot carries the point
    Expr e = sin(Expr::x()) * exp(Expr::y(0)) + pow(Expr::y(0), 3) / (2.0 + Expr::x());
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        double x = dist(rng), y1 = dist(rng);
        std::vector<double> ys{y1};
        double scalar = e.eval(x, std::span<const double>(ys), {});
        Jet jx = Jet::constant(x, 6);
        std::vector<Jet> jy{Jet::constant(y1, 6)};
        Jet jv = e.eval<Jet>(jx, std::span<const Jet>(jy), {});
        CHECK_THAT(jv.value(), WithinAbs(scalar, 1e-14 * std::max(1.0, std::abs(scalar))));
        for (std::size_t m = 1; m <= 6; ++m) CHECK_THAT(jv[m], WithinAbs(0.0, 1e-14));
    }
}
