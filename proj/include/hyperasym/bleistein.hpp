#pragma once

#include <array>
#include <cmath>

#include "errors.hpp"
#include "olver.hpp"
#include "saddle.hpp"

namespace hyperasym {

struct BleisteinCoeffs {
    std::array<double, 2> A{};  // A_0, A_1
    std::array<double, 2> B{};  // B_0, B_1
    double g0_at0 = 0.0;
    double g0p_at0 = 0.0;
    double alpha = 0.0;
};

// Endpoint values of g_0.  Away from coalescence both come from closed
// forms in (alpha, delta): g_0(0) = (alpha/delta)^b, and the derivative
// from the exact second-order inversion of the phase at t = 0.  At
// coalescence the limits in (eps, a, b, c) are used instead.
inline std::pair<double, double> g0_endpoint_values(const ProblemParams& P,
                                                    const SaddleData& sd) {
    const double b = P.b, eps = P.eps;
    if (sd.delta == 0.0) {
        const double g0 = std::pow(eps / (eps - 1.0), 0.5 * b);
        const double brace = P.a + (b + 1.0) * (2.0 * eps - 1.0) / 3.0 - eps * P.c;
        return {g0, g0 * brace / std::sqrt(eps * (eps - 1.0))};
    }
    const double alpha = sd.alpha, delta = sd.delta;
    const double g0 = std::pow(alpha / delta, b);
    const double psi2_0 = 1.0 - eps * P.x * P.x;  // phase curvature at t = 0
    const double fp0 = P.a * P.x + b + 1.0 - P.c; // amplitude slope at t = 0
    const double brace = (b + 1.0) / (2.0 * alpha) *
                             (alpha * alpha * psi2_0 / (delta * delta) - 1.0) +
                         alpha * fp0 / delta;
    return {g0, g0 * brace};
}

namespace detail {

// Direct divided differences; fine once |alpha| is not small.
inline BleisteinCoeffs bleistein_direct(double b, const G0Series& g, double g00,
                                        double g0p0) {
    const TruncatedSeries& p = g.at_peak;
    const double alpha = g.alpha;
    BleisteinCoeffs out;
    out.alpha = alpha;
    out.g0_at0 = g00;
    out.g0p_at0 = g0p0;
    out.A[0] = p[0];
    out.B[0] = (p[0] - g00) / alpha;
    const double g1_at0 = (b / alpha) * (out.B[0] - g0p0);
    const double g1_ata = ((1.0 - b) / alpha) * (out.B[0] - p[1]) + p[2];
    out.A[1] = g1_ata;
    out.B[1] = (g1_ata - g1_at0) / alpha;
    return out;
}

// Cancellation-free rearrangement through the recentred coefficients q_k:
//   B_0 = sum q_k alpha^(k-1),
//   A_1 = p_2 - (1-b) sum (k-1) q_k alpha^(k-2),
//   B_1 = sum q_k alpha^(k-3) (k-2)(k-1+2b)/2,
// exact identities that degrade gracefully to the coalescence limits
// B_0 = q_1, A_1 = b q_2, B_1 = (1+b) q_3 at alpha = 0.
inline BleisteinCoeffs bleistein_stable(double b, const G0Series& g) {
    const TruncatedSeries& p = g.at_peak;
    const TruncatedSeries& q = g.at_origin;
    const double alpha = g.alpha;
    BleisteinCoeffs out;
    out.alpha = alpha;
    out.g0_at0 = q[0];
    out.g0p_at0 = q[1];
    out.A[0] = p[0];

    const int K = q.order();
    double b0 = 0.0, a1tail = 0.0, b1 = 0.0;
    double apow = 1.0;
    for (int k = 1; k <= K; ++k) {
        b0 += q[k] * apow;
        apow *= alpha;
    }
    apow = 1.0;
    for (int k = 2; k <= K; ++k) {
        a1tail += (k - 1) * q[k] * apow;
        apow *= alpha;
    }
    apow = 1.0;
    for (int k = 3; k <= K; ++k) {
        b1 += q[k] * apow * (k - 2) * (k - 1.0 + 2.0 * b) * 0.5;
        apow *= alpha;
    }
    out.B[0] = b0;
    out.A[1] = p[2] - (1.0 - b) * a1tail;
    out.B[1] = b1;
    return out;
}

}  // namespace detail

// Branch switch for the divided-difference coefficients.  The direct forms
// lose roughly eps * p_0 / alpha^3 of absolute accuracy in B_1 (three nested
// differences over a window of width alpha), which is ~1e-10 at alpha = 0.01
// but already ~1e-7 at alpha = 1e-3.  The recentred rearrangement is an exact
// identity with geometric tails for |alpha| well inside the disc of
// convergence of the w-series (radius ~1 here), so handing over at 0.01
// keeps both branches comfortably inside their clean regimes.
inline constexpr double kBleisteinSwitch = 1e-2;

// Coefficients of the two-point (endpoint + interior peak) reduction,
// levels 0 and 1.  Higher levels are intentionally not produced.
inline BleisteinCoeffs bleistein_AB(const ProblemParams& P, const SaddleData& sd,
                                    const G0Series& g) {
    if (g.at_peak.order() < 3 || g.at_origin.order() < 3)
        throw contract_violation("bleistein_AB: need g_0 coefficients through order 3");
    const auto [g00, g0p0] = g0_endpoint_values(P, sd);
    if (std::abs(sd.alpha) >= kBleisteinSwitch) {
        return detail::bleistein_direct(P.b, g, g00, g0p0);
    }
    BleisteinCoeffs out = detail::bleistein_stable(P.b, g);
    // Closed-form endpoint data is at least as accurate as the recentring.
    out.g0_at0 = g00;
    out.g0p_at0 = g0p0;
    return out;
}

}  // namespace hyperasym
