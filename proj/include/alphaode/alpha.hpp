#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "alphaode/taylor.hpp"

namespace alphaode {

// ---------------------------------------------------------------------------
// The corrected two-stage step: an Euler predictor supplies the second
// evaluation point and the blending weight alpha_k is chosen from the
// truncated series of solution derivatives so that the step reproduces the
// truncated Taylor update exactly.

enum class DivergencePolicy {
    Error,     // throw DivergentSeries (message suggests halving the step)
    Continue,  // keep stepping, diagnostics carry the flag
};

struct SolverConfig {
    /// Highest total-derivative order D^m f retained in the weight series;
    /// the underlying Taylor expansion carries coefficients up to degree
    /// order + 1.
    std::size_t order = 8;
    double step = 0.1;
    /// Relative guard on the predictor-minus-base denominator.
    double denominator_tolerance = 1e-8;
    DivergencePolicy divergence_policy = DivergencePolicy::Error;
    std::size_t max_steps = 1000000;

    void validate() const {
        if (order < 2) throw InvalidConfig("alpha scheme requires order >= 2");
        if (order > 64) throw InvalidConfig("order is limited to 64");
        if (step == 0.0) throw InvalidConfig("step must be nonzero");
        if (denominator_tolerance <= 0.0) throw InvalidConfig("denominator tolerance must be positive");
    }

    std::size_t degree() const { return order + 1; }
};

struct AlphaWeights {
    std::vector<double> alpha;        // undefined (NaN) where the guard fired
    std::vector<double> numerator;    // sum_{m>=2} c_{k,m} dx^{m-1}
    std::vector<double> denominator;  // f_k(x0+dx; z) - f_k(x0; y0)
    std::vector<bool> fallback;
};

struct StepDiagnostics {
    std::vector<double> predictor;
    std::vector<double> alpha;
    std::vector<double> abs_denominator;
    std::vector<bool> fallback;
    TailEstimate tail;
};

/// Euler predictor z_k = y_k0 + dx f_k(x0; y0).
inline std::vector<double> predictor(const OdeSystem& sys, const State& s0, double dx) {
    std::vector<double> z = sys.eval_rhs(s0);
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = s0.y[k] + dx * z[k];
    return z;
}

namespace detail {

inline AlphaWeights alpha_weights_from(const OdeSystem& sys, const State& s0, double dx,
                                       const TaylorExpansion& te, double eps_den) {
    const std::size_t n = sys.dimension();
    std::vector<double> f0 = sys.eval_rhs(s0);

    std::vector<double> z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = s0.y[k] + dx * f0[k];
    std::vector<double> fz = sys.eval_rhs(State{s0.x + dx, z});

    AlphaWeights w;
    w.alpha.resize(n);
    w.numerator.resize(n);
    w.denominator.resize(n);
    w.fallback.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double num = 0.0;
        for (std::size_t m = te.degree(); m >= 2; --m)
            num = num * dx + te.coeff(k, m);
        num *= dx;  // sum of c_{k,m} dx^{m-1}, m = 2..degree
        double den = fz[k] - f0[k];
        w.numerator[k] = num;
        w.denominator[k] = den;
        double scale = std::max({std::abs(fz[k]), std::abs(f0[k]), 1.0});
        if (std::abs(den) <= eps_den * scale) {
            w.fallback[k] = true;
            w.alpha[k] = std::numeric_limits<double>::quiet_NaN();
        } else {
            w.fallback[k] = false;
            w.alpha[k] = 1.0 - num / den;
        }
    }
    return w;
}

}  // namespace detail

inline AlphaWeights alpha_weights(const OdeSystem& sys, const State& s0, double dx,
                                  std::size_t order, double eps_den = 1e-8) {
    if (order < 2) throw InvalidConfig("alpha weights require order >= 2");
    TaylorExpansion te = ode_taylor_coeffs(sys, s0, order + 1);
    return detail::alpha_weights_from(sys, s0, dx, te, eps_den);
}

/// Truncated Taylor update y_k = sum_{m=0}^{order+1} c_{k,m} dx^m.  Well
/// defined regardless of the denominator guard; algebraically identical to
/// the weighted step at the same order.
inline State taylor_fallback_step(const OdeSystem& sys, const State& s0, double dx,
                                  std::size_t order) {
    TaylorExpansion te = ode_taylor_coeffs(sys, s0, order + 1);
    State out;
    out.x = s0.x + dx;
    out.y.resize(sys.dimension());
    for (std::size_t k = 0; k < sys.dimension(); ++k) out.y[k] = te.evaluate(k, dx);
    return out;
}

/// The blended two-stage step with caller-supplied weights (alpha = 1/2
/// reproduces Heun's method).
inline State weighted_step(const OdeSystem& sys, const State& s0, double dx,
                           std::span<const double> alpha) {
    const std::size_t n = sys.dimension();
    std::vector<double> f0 = sys.eval_rhs(s0);
    std::vector<double> z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = s0.y[k] + dx * f0[k];
    std::vector<double> fz = sys.eval_rhs(State{s0.x + dx, z});
    State out;
    out.x = s0.x + dx;
    out.y.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        out.y[k] = s0.y[k] + dx * (alpha[k] * f0[k] + (1.0 - alpha[k]) * fz[k]);
    return out;
}

inline std::pair<State, StepDiagnostics> alpha_step(const OdeSystem& sys, const State& s0,
                                                    double dx, const SolverConfig& config) {
    config.validate();
    const std::size_t n = sys.dimension();

    TaylorExpansion te = ode_taylor_coeffs(sys, s0, config.degree());
    TailEstimate tail = series_tail_estimate(te, dx);
    if (tail.any_divergent() && config.divergence_policy == DivergencePolicy::Error)
        throw DivergentSeries(
            "truncated series shows no decay at dx = " + std::to_string(dx) +
            "; the step is likely outside the local convergence radius, try halving it");

    AlphaWeights w = detail::alpha_weights_from(sys, s0, dx, te, config.denominator_tolerance);

    std::vector<double> f0 = sys.eval_rhs(s0);
    State out;
    out.x = s0.x + dx;
    out.y.resize(n);

    StepDiagnostics diag;
    diag.predictor.resize(n);
    diag.alpha = w.alpha;
    diag.abs_denominator.resize(n);
    diag.fallback = w.fallback;
    diag.tail = tail;

    for (std::size_t k = 0; k < n; ++k) {
        diag.predictor[k] = s0.y[k] + dx * f0[k];
        diag.abs_denominator[k] = std::abs(w.denominator[k]);
        if (w.fallback[k]) {
            out.y[k] = te.evaluate(k, dx);
        } else {
            // y0 + dx [alpha f0 + (1-alpha) fz] written via the identity
            // alpha = 1 - N/d, fz = f0 + d.
            double fz = f0[k] + w.denominator[k];
            out.y[k] = s0.y[k] + dx * (w.alpha[k] * f0[k] + (1.0 - w.alpha[k]) * fz);
        }
    }
    return {std::move(out), std::move(diag)};
}

struct Trajectory {
    std::vector<State> states;                 // includes the initial state
    std::vector<StepDiagnostics> diagnostics;  // one per step
};

/// Fixed-step trajectory x0, x0+h, ..., x_end; coefficients are recomputed
/// at every grid point.
inline Trajectory integrate(const OdeSystem& sys, const State& s0, double x_end,
                            const SolverConfig& config) {
    config.validate();
    const double h = config.step;
    const double span = x_end - s0.x;
    double count = span / h;
    auto steps = static_cast<long long>(std::llround(count));
    if (steps < 1 || std::abs(count - static_cast<double>(steps)) > 1e-9 * std::max(1.0, std::abs(count)))
        throw InvalidConfig("(x_end - x0)/h must be a positive whole number of steps");
    if (static_cast<std::size_t>(steps) > config.max_steps)
        throw MaxStepsExceeded("requested " + std::to_string(steps) + " steps, limit is " +
                               std::to_string(config.max_steps));

    Trajectory tr;
    tr.states.reserve(static_cast<std::size_t>(steps) + 1);
    tr.states.push_back(s0);
    for (long long i = 0; i < steps; ++i) {
        const State& cur = tr.states.back();
        try {
            auto [next, diag] = alpha_step(sys, cur, h, config);
            next.x = s0.x + static_cast<double>(i + 1) * h;  // keep the grid drift-free
            tr.states.push_back(std::move(next));
            tr.diagnostics.push_back(std::move(diag));
        } catch (const DivergentSeries& e) {
            throw DivergentSeries("step " + std::to_string(i + 1) + " (x = " +
                                  std::to_string(cur.x) + "): " + e.what());
        } catch (const DomainError& e) {
            throw DomainError("step " + std::to_string(i + 1) + " (x = " +
                              std::to_string(cur.x) + "): " + e.what());
        }
    }
    return tr;
}

}  // namespace alphaode
