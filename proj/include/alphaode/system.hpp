#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alphaode/expr.hpp"

namespace alphaode {

/// A point (x, y) along a trajectory.
struct State {
    double x = 0.0;
    std::vector<double> y;
};

// ---------------------------------------------------------------------------
// OdeSystem: n right-hand sides f_k(x; y1..yn) plus bound parameters.
// Immutable after construction; safe to share across threads.

class OdeSystem {
public:
    OdeSystem() = default;

    std::size_t dimension() const { return rhs_.size(); }
    const Expr& rhs(std::size_t k) const { return rhs_.at(k); }
    const std::vector<Expr>& rhs() const { return rhs_; }
    const ParamMap& parameters() const { return params_; }

    /// Copy of the system with one parameter rebound (for sweeps).
    OdeSystem with_parameter(const std::string& name, double value) const {
        OdeSystem s = *this;
        s.params_[name] = value;
        return s;
    }

    template <class T>
    void eval_rhs_into(const T& x, std::span<const T> y, std::vector<T>& out) const {
        out.clear();
        out.reserve(rhs_.size());
        for (std::size_t k = 0; k < rhs_.size(); ++k) {
            try {
                out.push_back(rhs_[k].template eval<T>(x, y, params_));
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " in component " +
                                  std::to_string(k + 1) + ": " + rhs_[k].to_string());
            }
        }
    }

    std::vector<double> eval_rhs(const State& s) const {
        if (s.y.size() != dimension())
            throw DimensionMismatch("state dimension " + std::to_string(s.y.size()) +
                                    " does not match system dimension " +
                                    std::to_string(dimension()));
        std::vector<double> out;
        eval_rhs_into<double>(s.x, s.y, out);
        return out;
    }

private:
    friend OdeSystem build_system(std::vector<Expr>, std::size_t, ParamMap);

    std::vector<Expr> rhs_;
    ParamMap params_;
};

/// Validates dimensions, state indices and parameter bindings.
inline OdeSystem build_system(std::vector<Expr> rhs_exprs, std::size_t dimension,
                              ParamMap parameters = {}) {
    if (dimension < 1) throw DimensionMismatch("system dimension must be at least 1");
    if (rhs_exprs.size() != dimension)
        throw DimensionMismatch("expected " + std::to_string(dimension) +
                                " right-hand sides, got " + std::to_string(rhs_exprs.size()));

    std::vector<std::size_t> indices;
    std::vector<std::string> names;
    for (const Expr& e : rhs_exprs) e.collect_refs(indices, names);
    for (std::size_t i : indices) {
        if (i >= dimension)
            throw MalformedExpression("state variable y" + std::to_string(i + 1) +
                                      " exceeds system dimension " + std::to_string(dimension));
    }
    for (const std::string& n : names) {
        if (!parameters.count(n)) throw UnboundParameter("unbound parameter: " + n);
    }

    OdeSystem sys;
    sys.rhs_ = std::move(rhs_exprs);
    sys.params_ = std::move(parameters);
    return sys;
}

// ---------------------------------------------------------------------------
// reduce_order: phase-variable reduction of an order-m system to first order.
//
// Input convention for the n right-hand sides g_k: in g_k, the variable
// y_{j*n+k} (zero-based index j*n + (k-1)) denotes the j-th derivative of
// unknown k, j = 0..m-1.  The reduced system keeps that layout, so
// y1..yn are the unknowns, y_{n+1}..y_{2n} their first derivatives, and so on.

inline OdeSystem reduce_order(std::vector<Expr> g, std::size_t order, ParamMap parameters = {}) {
    const std::size_t n = g.size();
    if (n < 1) throw DimensionMismatch("need at least one equation");
    if (order < 2) throw MalformedExpression("reduce_order requires equation order >= 2");

    const std::size_t dim = n * order;
    std::vector<Expr> rhs;
    rhs.reserve(dim);
    for (std::size_t j = 0; j + 1 < order; ++j)
        for (std::size_t k = 0; k < n; ++k) rhs.push_back(Expr::y((j + 1) * n + k));
    for (std::size_t k = 0; k < n; ++k) rhs.push_back(g[k]);

    return build_system(std::move(rhs), dim, std::move(parameters));
}

}  // namespace alphaode
