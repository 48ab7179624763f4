#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "alphaode/alphaode.hpp"

namespace alphaode::testing {

inline double ulp_diff(double a, double b) {
    if (a == b) return 0.0;
    double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) / (std::numeric_limits<double>::epsilon() * scale);
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

/// Random polynomial system: n <= 3 components, each a sum of monomials in
/// x, y1..yn of total degree <= 3 with coefficients in [-1, 1].
inline OdeSystem random_polynomial_system(std::mt19937& rng, std::size_t& n_out) {
    std::uniform_int_distribution<std::size_t> dim_dist(1, 3);
    std::uniform_int_distribution<int> nterm_dist(1, 4);
    std::uniform_real_distribution<double> coeff_dist(-1.0, 1.0);

    const std::size_t n = dim_dist(rng);
    n_out = n;
    std::uniform_int_distribution<std::size_t> var_dist(0, n);  // 0 = x, 1..n = y
    std::uniform_int_distribution<int> deg_dist(0, 3);

    std::vector<Expr> rhs;
    for (std::size_t k = 0; k < n; ++k) {
        Expr acc = Expr::constant(coeff_dist(rng));
        int terms = nterm_dist(rng);
        for (int t = 0; t < terms; ++t) {
            Expr mono = Expr::constant(coeff_dist(rng));
            int degree_left = deg_dist(rng);
            while (degree_left-- > 0) {
                std::size_t v = var_dist(rng);
                mono = mono * (v == 0 ? Expr::x() : Expr::y(v - 1));
            }
            acc = acc + mono;
        }
        rhs.push_back(acc);
    }
    return build_system(std::move(rhs), n);
}

inline State random_state(std::mt19937& rng, std::size_t n, double box = 1.0) {
    std::uniform_real_distribution<double> dist(-box, box);
    State s;
    s.x = dist(rng);
    s.y.resize(n);
    for (double& v : s.y) v = dist(rng);
    return s;
}

}  // namespace alphaode::testing
