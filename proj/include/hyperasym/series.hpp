#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace hyperasym {

// Dense truncated Taylor series  sum_k c[k] * (u - center)^k.
//
// Operations truncate to the shorter operand so a result never pretends to
// carry more orders than its inputs justify.  Inputs that are exact
// polynomials should be padded (ts_pad) before combining them at higher
// order.
struct TruncatedSeries {
    double center = 0.0;
    std::vector<double> c;

    TruncatedSeries() : c(1, 0.0) {}
    TruncatedSeries(double center_, std::vector<double> coeffs)
        : center(center_), c(std::move(coeffs)) {
        if (c.empty()) throw contract_violation("TruncatedSeries: empty coefficient list");
    }

    int order() const { return static_cast<int>(c.size()) - 1; }

    // Coefficient access that reads past the truncation order as zero.
    double operator[](int k) const {
        return (k >= 0 && k <= order()) ? c[static_cast<size_t>(k)] : 0.0;
    }

    double eval(double u) const {
        const double w = u - center;
        double r = c.back();
        for (int k = order() - 1; k >= 0; --k) r = r * w + c[static_cast<size_t>(k)];
        return r;
    }
};

namespace detail {
inline void require_same_frame(const TruncatedSeries& a, const TruncatedSeries& b,
                               const char* who) {
    if (a.center != b.center)
        throw contract_violation(std::string(who) + ": operands expanded about different points");
}
}  // namespace detail

inline TruncatedSeries ts_pad(const TruncatedSeries& a, int order) {
    if (order < a.order()) throw contract_violation("ts_pad: cannot pad to a lower order");
    TruncatedSeries r = a;
    r.c.resize(static_cast<size_t>(order) + 1, 0.0);
    return r;
}

inline TruncatedSeries ts_truncate(const TruncatedSeries& a, int order) {
    if (order < 0 || order > a.order())
        throw contract_violation("ts_truncate: order out of range");
    TruncatedSeries r = a;
    r.c.resize(static_cast<size_t>(order) + 1);
    return r;
}

inline TruncatedSeries ts_add(const TruncatedSeries& a, const TruncatedSeries& b) {
    detail::require_same_frame(a, b, "ts_add");
    const int k = std::min(a.order(), b.order());
    TruncatedSeries r(a.center, std::vector<double>(static_cast<size_t>(k) + 1));
    for (int i = 0; i <= k; ++i) r.c[static_cast<size_t>(i)] = a[i] + b[i];
    return r;
}

inline TruncatedSeries ts_sub(const TruncatedSeries& a, const TruncatedSeries& b) {
    detail::require_same_frame(a, b, "ts_sub");
    const int k = std::min(a.order(), b.order());
    TruncatedSeries r(a.center, std::vector<double>(static_cast<size_t>(k) + 1));
    for (int i = 0; i <= k; ++i) r.c[static_cast<size_t>(i)] = a[i] - b[i];
    return r;
}

inline TruncatedSeries ts_scale(const TruncatedSeries& a, double s) {
    TruncatedSeries r = a;
    for (double& v : r.c) v *= s;
    return r;
}

// Cauchy product truncated to the shorter operand's order.
inline TruncatedSeries ts_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    detail::require_same_frame(a, b, "ts_mul");
    const int k = std::min(a.order(), b.order());
    TruncatedSeries r(a.center, std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k - i; ++j)
            r.c[static_cast<size_t>(i + j)] += a[i] * b[j];
    return r;
}

// a(u)^r for real r, via the first-order identity  r a' a^r = a (a^r)',
// which yields the coefficient recurrence
//   k a0 p_k = sum_{j=1..k} ((r+1) j - k) a_j p_{k-j}.
// Requires a strictly positive constant term.
inline TruncatedSeries ts_pow_real(const TruncatedSeries& a, double r) {
    if (!(a.c[0] > 0.0))
        throw domain_error("ts_pow_real: constant term must be strictly positive");
    const int k_max = a.order();
    TruncatedSeries p(a.center, std::vector<double>(static_cast<size_t>(k_max) + 1, 0.0));
    p.c[0] = std::pow(a.c[0], r);
    for (int k = 1; k <= k_max; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += ((r + 1.0) * j - k) * a[j] * p[k - j];
        p.c[static_cast<size_t>(k)] = s / (k * a.c[0]);
    }
    return p;
}

inline TruncatedSeries ts_derivative(const TruncatedSeries& a) {
    if (a.order() == 0) return TruncatedSeries(a.center, {0.0});
    std::vector<double> d(static_cast<size_t>(a.order()));
    for (int k = 1; k <= a.order(); ++k) d[static_cast<size_t>(k - 1)] = k * a[k];
    return TruncatedSeries(a.center, std::move(d));
}

// f(g(u)).  The inner constant term must equal the outer expansion point, so
// that substituting g's deviation into f is legitimate.
inline TruncatedSeries ts_compose(const TruncatedSeries& f, const TruncatedSeries& g) {
    if (g.c[0] != f.center)
        throw contract_violation("ts_compose: inner constant term does not match outer center");
    const int k = std::min(f.order(), g.order());
    TruncatedSeries dev(g.center, std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
    for (int i = 1; i <= k; ++i) dev.c[static_cast<size_t>(i)] = g[i];
    TruncatedSeries r(g.center, std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
    r.c[0] = f[k];
    for (int j = k - 1; j >= 0; --j) {
        r = ts_mul(r, dev);
        r.c[0] += f[j];
    }
    return r;
}

// Compositional inverse of a series with a(0) = 0, a'(0) != 0, expanded
// about 0.  Fixed-point iteration s <- (id - (a o s - a1 s)) / a1 gains at
// least one correct order per pass.
inline TruncatedSeries ts_revert(const TruncatedSeries& a) {
    if (a.center != 0.0) throw contract_violation("ts_revert: series must be centered at 0");
    if (a.c[0] != 0.0) throw contract_violation("ts_revert: constant term must vanish");
    const int k = a.order();
    if (k < 1 || a.c[1] == 0.0)
        throw contract_violation("ts_revert: linear coefficient must be nonzero");
    const double a1 = a.c[1];
    TruncatedSeries s(0.0, std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
    s.c[1] = 1.0 / a1;
    for (int pass = 0; pass < k; ++pass) {
        TruncatedSeries n = ts_compose(a, s);  // = a1 s + higher-order error
        for (int i = 0; i <= k; ++i) n.c[static_cast<size_t>(i)] -= a1 * s[i];
        for (int i = 0; i <= k; ++i) s.c[static_cast<size_t>(i)] = -n[i] / a1;
        s.c[1] += 1.0 / a1;
    }
    return s;
}

// Re-expand about center + h (exact binomial recombination, done in place
// with the classic O(K^2) synthetic-division sweep).
inline TruncatedSeries ts_shift(const TruncatedSeries& a, double h) {
    TruncatedSeries r = a;
    const int k_max = r.order();
    for (int k = 0; k < k_max; ++k)
        for (int j = k_max - 1; j >= k; --j)
            r.c[static_cast<size_t>(j)] += h * r.c[static_cast<size_t>(j + 1)];
    r.center += h;
    return r;
}

// Taylor coefficients of a(w) / (w + alpha), one order lower than a.
//
// The quotient is meaningful as a power series about 0 whenever a(-alpha)
// vanishes analytically (the factor then divides out); callers own that
// guarantee.  Two evaluation orders are used.  The ascending recurrence is
// exact for the truncated input but divides by alpha each step, amplifying
// rounding by |alpha|^-k; it is used when |alpha| is not small.  For small
// |alpha| (including exactly 0, where the division degenerates to a
// coefficient shift) the descending synthetic division multiplies by alpha
// instead and keeps rounding at the epsilon level, at the cost of an
// O(|a_{K+1}| |alpha|^{K-k}) truncation bias -- callers in that regime
// should carry an order margin beyond the coefficients they consume.
inline TruncatedSeries ts_div_linear(const TruncatedSeries& a, double alpha) {
    const int k = a.order();
    if (k < 1) throw contract_violation("ts_div_linear: need at least order 1");
    std::vector<double> q(static_cast<size_t>(k), 0.0);
    constexpr double kAscendingCutoff = 0.15;
    if (std::abs(alpha) >= kAscendingCutoff) {
        q[0] = a[0] / alpha;
        for (int j = 1; j < k; ++j) q[static_cast<size_t>(j)] = (a[j] - q[static_cast<size_t>(j - 1)]) / alpha;
    } else {
        q[static_cast<size_t>(k - 1)] = a[k];
        for (int j = k - 1; j >= 1; --j)
            q[static_cast<size_t>(j - 1)] = a[j] - alpha * q[static_cast<size_t>(j)];
        // Remainder a[0] - alpha*q[0] = a(-alpha): analytically zero here.
    }
    return TruncatedSeries(a.center, std::move(q));
}

}  // namespace hyperasym
