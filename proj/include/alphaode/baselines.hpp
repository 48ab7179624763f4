#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "alphaode/system.hpp"

namespace alphaode {

// Classical fixed-step integrators used for comparison runs and as
// numerical reference oracles.

/// Heun's method: trapezoidal corrector over an Euler predictor.
inline State heun_step(const OdeSystem& sys, const State& s0, double h) {
    const std::size_t n = sys.dimension();
    std::vector<double> f0 = sys.eval_rhs(s0);
    std::vector<double> z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = s0.y[k] + h * f0[k];
    std::vector<double> fz = sys.eval_rhs(State{s0.x + h, z});
    State out;
    out.x = s0.x + h;
    out.y.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.y[k] = s0.y[k] + h * 0.5 * (f0[k] + fz[k]);
    return out;
}

/// Classical four-stage Runge-Kutta with weights (1,2,2,1)/6.
inline State rk4_step(const OdeSystem& sys, const State& s0, double h) {
    const std::size_t n = sys.dimension();
    std::vector<double> k1 = sys.eval_rhs(s0);

    State tmp;
    tmp.y.resize(n);
    tmp.x = s0.x + 0.5 * h;
    for (std::size_t k = 0; k < n; ++k) tmp.y[k] = s0.y[k] + 0.5 * h * k1[k];
    std::vector<double> k2 = sys.eval_rhs(tmp);

    for (std::size_t k = 0; k < n; ++k) tmp.y[k] = s0.y[k] + 0.5 * h * k2[k];
    std::vector<double> k3 = sys.eval_rhs(tmp);

    tmp.x = s0.x + h;
    for (std::size_t k = 0; k < n; ++k) tmp.y[k] = s0.y[k] + h * k3[k];
    std::vector<double> k4 = sys.eval_rhs(tmp);

    State out;
    out.x = s0.x + h;
    out.y.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        out.y[k] = s0.y[k] + h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    return out;
}

struct ReferenceRun {
    std::string method;
    double h_ref = 0.0;
    std::vector<State> trajectory;  // states at the requested output points
    /// Max-norm difference against the same run at h_ref/2.
    double estimated_error = 0.0;
};

namespace detail {

inline std::vector<State> rk4_at_outputs(const OdeSystem& sys, const State& s0, double h,
                                         const std::vector<double>& outputs,
                                         std::size_t max_steps) {
    std::vector<State> out;
    out.reserve(outputs.size());
    State cur = s0;
    std::size_t step = 0;
    for (double xo : outputs) {
        double count = (xo - cur.x) / h;
        auto k = static_cast<long long>(std::llround(count));
        if (k < 0 || std::abs(count - static_cast<double>(k)) > 1e-6)
            throw InvalidConfig("output point " + std::to_string(xo) +
                                " does not lie on the reference grid");
        for (long long i = 0; i < k; ++i) {
            if (++step > max_steps) throw MaxStepsExceeded("reference run exceeded step limit");
            cur = rk4_step(sys, cur, h);
        }
        cur.x = xo;  // pin to the requested point
        out.push_back(cur);
    }
    return out;
}

}  // namespace detail

/// RK4 trajectory at the requested outputs, validated by a step-halving rerun.
inline ReferenceRun reference_solve(const OdeSystem& sys, const State& s0, double x_end,
                                    double h_ref, std::vector<double> outputs,
                                    std::size_t max_steps = 50000000) {
    if (outputs.empty()) {
        outputs.push_back(x_end);
    }
    ReferenceRun run;
    run.method = "rk4";
    run.h_ref = h_ref;
    run.trajectory = detail::rk4_at_outputs(sys, s0, h_ref, outputs, max_steps);
    std::vector<State> halved = detail::rk4_at_outputs(sys, s0, h_ref / 2.0, outputs, max_steps);
    double err = 0.0;
    for (std::size_t i = 0; i < outputs.size(); ++i)
        for (std::size_t k = 0; k < sys.dimension(); ++k)
            err = std::max(err, std::abs(run.trajectory[i].y[k] - halved[i].y[k]));
    run.estimated_error = err;
    return run;
}

}  // namespace alphaode
