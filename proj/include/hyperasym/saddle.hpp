#pragma once

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "series.hpp"

namespace hyperasym {

// Parameters of F(a + eps*lambda, b; c + lambda; x).  The large parameter
// lambda itself is supplied at evaluation time; everything here describes
// the lambda-independent geometry.
struct ProblemParams {
    double a = 1.0;
    double b = 1.5;
    double c = 1.0;
    double eps = 2.0;  // ratio of the two growing parameters, > 1
    double x = 0.6;    // argument, in (0, 1)
};

inline void validate(const ProblemParams& P) {
    if (!(P.eps > 1.0)) throw domain_error("ProblemParams: eps must exceed 1");
    if (!(P.x > 0.0 && P.x < 1.0)) throw domain_error("ProblemParams: x must lie in (0,1)");
    if (!std::isfinite(P.a) || !std::isfinite(P.b) || !std::isfinite(P.c))
        throw domain_error("ProblemParams: a, b, c must be finite");
}

// Offset from the coalescence point eps*x = 1.
inline double coalescence_offset(const ProblemParams& P) { return P.eps * P.x - 1.0; }

// Phase of the Laplace-type representation: psi(t) = eps log(1-xt) - log(1-t).
inline double phase_psi(const ProblemParams& P, double t) {
    if (!(t < 1.0 && P.x * t < 1.0))
        throw domain_error("phase_psi: t must keep both 1-t and 1-xt positive");
    return P.eps * std::log1p(-P.x * t) - std::log1p(-t);
}

// Slowly varying amplitude: f(t) = (1-t)^(c-b-1) (1-xt)^(-a).
inline double amp_f(const ProblemParams& P, double t) {
    if (!(t < 1.0 && P.x * t < 1.0))
        throw domain_error("amp_f: t must keep both 1-t and 1-xt positive");
    return std::exp((P.c - P.b - 1.0) * std::log1p(-t) - P.a * std::log1p(-P.x * t));
}

// Interior stationary point of psi; crosses the integration endpoint t = 0
// exactly at coalescence.
inline double saddle_point(const ProblemParams& P) {
    return (P.eps * P.x - 1.0) / ((P.eps - 1.0) * P.x);
}

struct SaddleData {
    double t_s = 0.0;          // saddle location
    double alpha = 0.0;        // transition parameter, sign of t_s
    double psi_s = 0.0;        // psi at the saddle (<= 0)
    double delta = 0.0;        // eps*x - 1
    double psi1_at0 = 0.0;     // psi'(0) = 1 - eps*x
    double psi2_at_ts = 0.0;   // psi''(t_s) > 0
    bool series_branch = false;  // small-delta series used for psi_s
};

// Coefficients below this |delta| come from the exact small-offset series;
// above it the direct log1p formula is safe.
inline constexpr double kDeltaSwitch = 1e-3;

namespace detail {

// psi(t_s) collapses to (eps-1) log(1 - delta/(eps-1)) + log(1 + delta),
// whose double evaluation cancels at order delta^2.  Expanding both logs
// gives the exact series
//   psi_s = sum_{n>=2} delta^n / n * ((-1)^(n-1) - (eps-1)^(1-n)),
// which is used near coalescence.
inline double psi_s_series(double eps, double delta) {
    const double r = 1.0 / (eps - 1.0);
    double dp = delta;   // delta^(n-1)
    double rp = 1.0;     // (eps-1)^(2-n)
    double sign = -1.0;  // (-1)^(n-1)
    double sum = 0.0;
    double prev = INFINITY;
    for (int n = 2; n <= 60; ++n) {
        dp *= delta;
        rp *= r;
        const double term = dp / n * (sign - rp);
        sum += term;
        // Individual terms can vanish by parity (e.g. eps = 2), so stop
        // only after two consecutive negligible terms.
        if (std::abs(term) <= 1e-20 * std::abs(sum) && std::abs(prev) <= 1e-20 * std::abs(sum))
            break;
        prev = term;
        sign = -sign;
    }
    return sum;
}

inline double psi_s_direct(double eps, double delta) {
    return (eps - 1.0) * std::log1p(-delta / (eps - 1.0)) + std::log1p(delta);
}

}  // namespace detail

// Transition parameter alpha with alpha^2/2 = -psi(t_s) and sign(alpha) =
// sign(t_s); alpha = +0 exactly at coalescence.
inline SaddleData alpha_param(const ProblemParams& P) {
    validate(P);
    SaddleData sd;
    sd.delta = coalescence_offset(P);
    sd.t_s = P.eps * sd.delta / ((P.eps - 1.0) * (1.0 + sd.delta));
    sd.series_branch = std::abs(sd.delta) < kDeltaSwitch;
    sd.psi_s = sd.series_branch ? detail::psi_s_series(P.eps, sd.delta)
                                : detail::psi_s_direct(P.eps, sd.delta);
    const double mag = std::sqrt(std::max(0.0, -2.0 * sd.psi_s));
    sd.alpha = sd.delta < 0.0 ? -mag : mag;
    sd.psi1_at0 = -sd.delta;
    const double s = (P.eps - 1.0) * P.x / (1.0 - P.x);  // 1/(1 - t_s)
    sd.psi2_at_ts = s * s * (P.eps - 1.0) / P.eps;
    return sd;
}

// Taylor series of the quadratic normal variable w(t) about the saddle:
//   psi(t_s + tau) - psi_s = w(tau)^2 / 2,   w'(0) = sqrt(psi''(t_s)) > 0.
// Built from the factored form w = tau * sqrt(2 h(tau)) with
// h_j = zeta_{j+2} and zeta_n the exact Taylor coefficients of the phase at
// the saddle, so the linear coefficient is sqrt(psi''(t_s)) by construction
// and the stationarity of psi never enters numerically.
inline TruncatedSeries w_of_t_series(const ProblemParams& P, const SaddleData& sd, int order) {
    if (order < 2) throw contract_violation("w_of_t_series: order must be at least 2");
    // 1/(1-t_s) and x/(1-x t_s) in cancellation-free closed form.
    const double inv_omt = (P.eps - 1.0) * P.x / (1.0 - P.x);
    const double x_ovr_omxt = (P.eps - 1.0) * P.x / (P.eps * (1.0 - P.x));
    // h(tau) = sum_j zeta_{j+2} tau^j with zeta_n = (A^n - eps B^n)/n.
    std::vector<double> h(static_cast<size_t>(order));
    double an = inv_omt * inv_omt;      // A^n
    double bn = x_ovr_omxt * x_ovr_omxt;  // B^n
    for (int n = 2; n <= order + 1; ++n) {
        h[static_cast<size_t>(n - 2)] = (an - P.eps * bn) / n;
        an *= inv_omt;
        bn *= x_ovr_omxt;
    }
    TruncatedSeries two_h = ts_scale(TruncatedSeries(0.0, std::move(h)), 2.0);
    if (!(two_h.c[0] > 0.0))
        throw domain_error("w_of_t_series: phase is not convex at the saddle");
    TruncatedSeries root = ts_pow_real(two_h, 0.5);
    std::vector<double> w(static_cast<size_t>(order) + 1, 0.0);
    for (int k = 1; k <= order; ++k) w[static_cast<size_t>(k)] = root[k - 1];
    // Pin the linear coefficient to sqrt(psi'') computed from saddle data so
    // downstream consumers see exactly the documented normalisation.
    w[1] = std::sqrt(sd.psi2_at_ts);
    return TruncatedSeries(0.0, std::move(w));
}

}  // namespace hyperasym
