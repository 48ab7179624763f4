#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "alphaode/errors.hpp"

namespace alphaode {

// ---------------------------------------------------------------------------
// Jet: truncated power series a_0 + a_1 t + ... + a_M t^M with the standard
// coefficient recurrences for the elementary functions.  Everything beyond
// index M is dropped; in exact arithmetic the retained coefficients are exact.

class Jet {
public:
    explicit Jet(std::size_t order) : c_(order + 1, 0.0) {}

    static Jet constant(double v, std::size_t order) {
        Jet j(order);
        j.c_[0] = v;
        return j;
    }

    /// v + t: the series of the expansion variable itself.
    static Jet variable(double v, std::size_t order) {
        Jet j(order);
        j.c_[0] = v;
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }

    std::size_t order() const { return c_.size() - 1; }
    double operator[](std::size_t m) const { return c_[m]; }
    double& operator[](std::size_t m) { return c_[m]; }

    double value() const { return c_[0]; }

    Jet operator-() const {
        Jet r = *this;
        for (double& v : r.c_) v = -v;
        return r;
    }

    Jet& operator+=(const Jet& o) {
        for (std::size_t m = 0; m < c_.size(); ++m) c_[m] += o.c_[m];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t m = 0; m < c_.size(); ++m) c_[m] -= o.c_[m];
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }

    // Cauchy product, truncated.
    friend Jet operator*(const Jet& a, const Jet& b) {
        const std::size_t M = a.order();
        Jet r(M);
        for (std::size_t k = 0; k <= M; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
            r.c_[k] = s;
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) {
        if (b.c_[0] == 0.0) throw DomainError("jet division by series with zero leading coefficient");
        const std::size_t M = a.order();
        Jet r(M);
        for (std::size_t k = 0; k <= M; ++k) {
            double s = a.c_[k];
            for (std::size_t j = 0; j < k; ++j) s -= r.c_[j] * b.c_[k - j];
            r.c_[k] = s / b.c_[0];
        }
        return r;
    }

    friend Jet operator*(Jet a, double s) {
        for (double& v : a.c_) v *= s;
        return a;
    }
    friend Jet operator*(double s, Jet a) { return std::move(a) * s; }
    friend Jet operator+(Jet a, double s) {
        a.c_[0] += s;
        return a;
    }
    friend Jet operator+(double s, Jet a) { return std::move(a) + s; }
    friend Jet operator-(Jet a, double s) { return std::move(a) + (-s); }
    friend Jet operator-(double s, const Jet& a) { return -a + s; }

private:
    std::vector<double> c_;
};

inline Jet exp(const Jet& a) {
    const std::size_t M = a.order();
    Jet r(M);
    r[0] = std::exp(a[0]);
    for (std::size_t k = 1; k <= M; ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * r[k - j];
        r[k] = s / static_cast<double>(k);
    }
    return r;
}

inline Jet log(const Jet& a) {
    if (a[0] <= 0.0) throw DomainError("log of series with non-positive leading coefficient");
    const std::size_t M = a.order();
    Jet r(M);
    r[0] = std::log(a[0]);
    for (std::size_t k = 1; k <= M; ++k) {
        double s = static_cast<double>(k) * a[k];
        for (std::size_t j = 1; j < k; ++j) s -= static_cast<double>(j) * r[j] * a[k - j];
        r[k] = s / (static_cast<double>(k) * a[0]);
    }
    return r;
}

namespace detail {
// sin and cos share one coupled recurrence.
inline void sincos(const Jet& a, Jet& s, Jet& c) {
    const std::size_t M = a.order();
    s[0] = std::sin(a[0]);
    c[0] = std::cos(a[0]);
    for (std::size_t k = 1; k <= M; ++k) {
        double ss = 0.0, cc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            ss += static_cast<double>(j) * a[j] * c[k - j];
            cc -= static_cast<double>(j) * a[j] * s[k - j];
        }
        s[k] = ss / static_cast<double>(k);
        c[k] = cc / static_cast<double>(k);
    }
}
}  // namespace detail

inline Jet sin(const Jet& a) {
    Jet s(a.order()), c(a.order());
    detail::sincos(a, s, c);
    return s;
}

inline Jet cos(const Jet& a) {
    Jet s(a.order()), c(a.order());
    detail::sincos(a, s, c);
    return c;
}

namespace detail {
// t' = w * a' with w = 1 + t^2 (tan) or w = 1 - t^2 (tanh).
inline Jet tan_like(const Jet& a, double t0, double sign) {
    const std::size_t M = a.order();
    Jet t(M), w(M);
    t[0] = t0;
    w[0] = 1.0 + sign * t0 * t0;
    for (std::size_t k = 1; k <= M; ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * w[k - j];
        t[k] = s / static_cast<double>(k);
        double ws = 0.0;
        for (std::size_t j = 0; j <= k; ++j) ws += t[j] * t[k - j];
        w[k] = sign * ws;
    }
    return t;
}
}  // namespace detail

inline Jet tan(const Jet& a) { return detail::tan_like(a, std::tan(a[0]), +1.0); }
inline Jet tanh(const Jet& a) { return detail::tan_like(a, std::tanh(a[0]), -1.0); }

inline Jet checked_sqrt(const Jet& a) {
    if (a[0] <= 0.0) throw DomainError("sqrt of series with non-positive leading coefficient");
    const std::size_t M = a.order();
    Jet r(M);
    r[0] = std::sqrt(a[0]);
    for (std::size_t k = 1; k <= M; ++k) {
        double s = a[k];
        for (std::size_t j = 1; j < k; ++j) s -= r[j] * r[k - j];
        r[k] = s / (2.0 * r[0]);
    }
    return r;
}

inline Jet sqrt(const Jet& a) { return checked_sqrt(a); }

inline Jet pow_int(const Jet& a, long long n) {
    const std::size_t M = a.order();
    if (n < 0) return Jet::constant(1.0, M) / pow_int(a, -n);
    Jet acc = Jet::constant(1.0, M);
    Jet sq = a;
    while (n > 0) {
        if (n & 1) acc = acc * sq;
        if (n >>= 1) sq = sq * sq;
    }
    return acc;
}

/// a^e for real e; requires a positive leading coefficient.
inline Jet pow_real(const Jet& a, double e) {
    if (a[0] <= 0.0)
        throw DomainError("pow with non-integer exponent requires positive leading coefficient");
    const std::size_t M = a.order();
    Jet r(M);
    r[0] = std::pow(a[0], e);
    for (std::size_t k = 1; k <= M; ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j)
            s += ((e + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * a[j] * r[k - j];
        r[k] = s / (static_cast<double>(k) * a[0]);
    }
    return r;
}

// Hooks for the generic expression evaluator.
inline Jet checked_div(const Jet& a, const Jet& b) { return a / b; }
inline Jet checked_log(const Jet& a) { return log(a); }
inline Jet pow_general(const Jet& base, const Jet& e) { return exp(e * log(base)); }
inline Jet constant_like(const Jet& model, double v) { return Jet::constant(v, model.order()); }

}  // namespace alphaode
