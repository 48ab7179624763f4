#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "alphaode/jet.hpp"
#include "alphaode/system.hpp"

namespace alphaode {

// ---------------------------------------------------------------------------
// TaylorExpansion: per-variable solution coefficients c_{k,m} = y_k^(m)(x0)/m!
// for m = 0..degree.  The scaled accessor d_f(k, j) returns the j-th total
// derivative of f_k along the trajectory, d_f(k,0) being f_k itself.

class TaylorExpansion {
public:
    TaylorExpansion(double x0, std::size_t n, std::size_t degree)
        : x0_(x0), n_(n), degree_(degree), c_(n * (degree + 1), 0.0) {}

    double x0() const { return x0_; }
    std::size_t dimension() const { return n_; }
    std::size_t degree() const { return degree_; }

    double coeff(std::size_t k, std::size_t m) const { return c_[k * (degree_ + 1) + m]; }
    double& coeff(std::size_t k, std::size_t m) { return c_[k * (degree_ + 1) + m]; }

    /// (j+1)! c_{k,j+1}: the j-th power of the total-derivative operator
    /// applied to f_k, evaluated at the expansion point.
    double d_f(std::size_t k, std::size_t j) const {
        double fact = 1.0;
        for (std::size_t i = 2; i <= j + 1; ++i) fact *= static_cast<double>(i);
        return fact * coeff(k, j + 1);
    }

    /// Horner evaluation of the truncated series for variable k at x0 + dx.
    double evaluate(std::size_t k, double dx) const {
        double acc = 0.0;
        for (std::size_t m = degree_ + 1; m-- > 0;) acc = acc * dx + coeff(k, m);
        return acc;
    }

private:
    double x0_;
    std::size_t n_, degree_;
    std::vector<double> c_;
};

/// Solution Taylor coefficients at s0 by jet recursion: feed the partially
/// known series of y back through f and read one more coefficient per pass.
inline TaylorExpansion ode_taylor_coeffs(const OdeSystem& sys, const State& s0,
                                         std::size_t degree) {
    if (degree < 1) throw InvalidConfig("Taylor degree must be at least 1");
    const std::size_t n = sys.dimension();
    if (s0.y.size() != n)
        throw DimensionMismatch("state dimension does not match system dimension");

    TaylorExpansion te(s0.x, n, degree);

    Jet x = Jet::variable(s0.x, degree);
    std::vector<Jet> y(n, Jet(degree));
    for (std::size_t k = 0; k < n; ++k) {
        y[k][0] = s0.y[k];
        te.coeff(k, 0) = s0.y[k];
    }

    std::vector<Jet> f;
    for (std::size_t m = 0; m < degree; ++m) {
        sys.eval_rhs_into<Jet>(x, y, f);
        for (std::size_t k = 0; k < n; ++k) {
            double cm = f[k][m] / static_cast<double>(m + 1);
            y[k][m + 1] = cm;
            te.coeff(k, m + 1) = cm;
        }
    }
    return te;
}

// ---------------------------------------------------------------------------
// Heuristic truncation-tail diagnostics.  The tail is the magnitude of the
// last two retained terms at step dx; the divergence flag is raised when the
// top three term magnitudes are non-decreasing.

struct TailEstimate {
    std::vector<double> tail;
    std::vector<bool> divergent;

    bool any_divergent() const {
        for (bool d : divergent)
            if (d) return true;
        return false;
    }
    double max_tail() const {
        double t = 0.0;
        for (double v : tail) t = std::max(t, v);
        return t;
    }
};

inline TailEstimate series_tail_estimate(const TaylorExpansion& te, double dx) {
    const std::size_t M = te.degree();
    if (M < 3) throw InvalidConfig("tail estimate needs degree >= 3");

    TailEstimate est;
    est.tail.resize(te.dimension());
    est.divergent.resize(te.dimension());
    for (std::size_t k = 0; k < te.dimension(); ++k) {
        auto term = [&](std::size_t m) { return std::abs(te.coeff(k, m) * std::pow(dx, m)); };
        double t2 = term(M - 2), t1 = term(M - 1), t0 = term(M);
        est.tail[k] = std::max(t1, t0);
        est.divergent[k] = (t1 >= t2 && t0 >= t1 && t0 > 0.0);
    }
    return est;
}

}  // namespace alphaode
