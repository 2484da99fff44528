#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "bleistein.hpp"
#include "double_double.hpp"
#include "errors.hpp"
#include "kernel.hpp"
#include "olver.hpp"
#include "saddle.hpp"

namespace hyperasym {

enum class EvalBranch {
    theorem1,
    theorem2,
    coalescent,
    contiguous_reduction,
    polynomial_exact,
    polynomial_asym,
};

inline const char* to_string(EvalBranch br) {
    switch (br) {
        case EvalBranch::theorem1: return "theorem1";
        case EvalBranch::theorem2: return "theorem2";
        case EvalBranch::coalescent: return "coalescent";
        case EvalBranch::contiguous_reduction: return "contiguous_reduction";
        case EvalBranch::polynomial_exact: return "polynomial_exact";
        case EvalBranch::polynomial_asym: return "polynomial_asym";
    }
    return "unknown";
}

struct EvalResult {
    double value = 0.0;
    double est_error = 0.0;  // magnitude of the first omitted term (heuristic)
    EvalBranch branch = EvalBranch::theorem2;
    int k_order = 0;
};

namespace detail {

// Shared front factor gamma(c+lam)/gamma(c-b+lam) * exp(-lam*psi_s).  The
// exponent stays below ~10 in the tabulated regime; anything beyond +-700
// is outside what the assembled double can represent and is rejected rather
// than silently flushed.
inline double lambda_prefactor(double b, double c, double lam, double psi_s) {
    const double e = -lam * psi_s;
    if (std::abs(e) > 700.0)
        throw accuracy_error("lambda_prefactor: exponent magnitude exceeds 700", e);
    return gamma_ratio_G(b, c + lam) * std::exp(e);
}

inline void check_uniform_preconditions(const ProblemParams& P, double lam,
                                        const char* who) {
    validate(P);
    if (!(P.b > 0.0))
        throw domain_error(std::string(who) +
                           ": requires b > 0 (reduce negative b first)");
    if (!(lam > 0.0)) throw domain_error(std::string(who) + ": lambda must be positive");
    if (!(P.c - P.b + lam > 0.0))
        throw domain_error(std::string(who) + ": c - b + lambda must be positive");
}

}  // namespace detail

// Uniform evaluation with the regrouped coefficient families: kernel pair at
// chi = alpha*sqrt(lam), integer inverse powers of lam through k_order.  The
// first omitted pair (order k_order+1) is always formed as well and reported
// as the error estimate.
inline EvalResult eval_theorem2(const ProblemParams& P, double lam, int k_order = 3,
                                int tail_depth = kAdaptiveTail) {
    detail::check_uniform_preconditions(P, lam, "eval_theorem2");
    if (k_order < 0 || k_order > 8)
        throw contract_violation("eval_theorem2: k_order must lie in [0,8]");

    const SaddleData sd = alpha_param(P);
    constexpr int kWorkOrder = 48;
    const G0Series g = pk_coeffs(P, sd, kWorkOrder);
    const CkDkPolys polys = ckdk_polynomials(P.b, kWorkOrder);
    const OlverCoeffs oc =
        regroup_CD(g.at_peak.c, polys, sd.alpha, k_order + 1, tail_depth);

    const double chi = sd.alpha * std::sqrt(lam);
    const KernelValues kv = w_kernel(P.b, chi);
    const double pref = detail::lambda_prefactor(P.b, P.c, lam, sd.psi_s);
    const double lamb = std::pow(lam, -0.5 * P.b);

    double sum_c = 0.0, sum_d = 0.0, lpow = 1.0;
    for (int k = 0; k <= k_order; ++k) {
        sum_c += oc.curlyC[static_cast<size_t>(k)] / lpow;
        sum_d += oc.curlyD[static_cast<size_t>(k)] / lpow;
        lpow *= lam;
    }
    const double wc = kv.w * lamb;
    const double wd = kv.w_prime * lamb / std::sqrt(lam);
    const double value = pref * (wc * sum_c + wd * sum_d);
    double est = pref * (std::abs(wc * oc.curlyC[static_cast<size_t>(k_order) + 1]) +
                         std::abs(wd * oc.curlyD[static_cast<size_t>(k_order) + 1])) /
                 lpow;
    if (kv.underflow) est = std::max(est, std::abs(value));
    return {value, est, EvalBranch::theorem2, k_order};
}

// Same expansion, but the regrouped coefficients are built from the amplitude
// coefficients p_0..p_cap only, with an exact zero tail beyond.  This mirrors
// a pipeline whose series stage ran to a fixed order, and reproduces the
// bundled level-three reference grid (whose source data stop at p_6, which
// also empties the top curlyD slot).  The truncation is self-consistent: the
// regrouping of a degree-capped amplitude is an identity, so for alpha > 0
// the omitted curlyC and curlyD tails cancel through the kernel ratio, while
// for alpha < 0 they accumulate into a lambda-independent error floor.  The
// estimate is the cap's offset from the converged-tail value plus the
// converged evaluation's own estimate.
inline EvalResult eval_theorem2_capped(const ProblemParams& P, double lam,
                                       int k_order = 3, int p_cap = 6) {
    detail::check_uniform_preconditions(P, lam, "eval_theorem2_capped");
    if (k_order < 0 || k_order > 8)
        throw contract_violation("eval_theorem2_capped: k_order must lie in [0,8]");
    if (p_cap < 0 || p_cap > 40)
        throw contract_violation("eval_theorem2_capped: p_cap must lie in [0,40]");

    const SaddleData sd = alpha_param(P);
    const G0Series g = pk_coeffs(P, sd, std::max(p_cap, 4));
    std::vector<double> p(g.at_peak.c.begin(),
                          g.at_peak.c.begin() + static_cast<long>(p_cap) + 1);
    const int top = 2 * k_order + 1;
    p.resize(static_cast<size_t>(top + p_cap) + 1, 0.0);
    const CkDkPolys polys = ckdk_polynomials(P.b, top + p_cap);
    const OlverCoeffs oc = regroup_CD(p, polys, sd.alpha, k_order, p_cap);

    const double chi = sd.alpha * std::sqrt(lam);
    const KernelValues kv = w_kernel(P.b, chi);
    const double pref = detail::lambda_prefactor(P.b, P.c, lam, sd.psi_s);
    const double lamb = std::pow(lam, -0.5 * P.b);

    double sum_c = 0.0, sum_d = 0.0, lpow = 1.0;
    for (int k = 0; k <= k_order; ++k) {
        sum_c += oc.curlyC[static_cast<size_t>(k)] / lpow;
        sum_d += oc.curlyD[static_cast<size_t>(k)] / lpow;
        lpow *= lam;
    }
    const double wc = kv.w * lamb;
    const double wd = kv.w_prime * lamb / std::sqrt(lam);
    const double value = pref * (wc * sum_c + wd * sum_d);

    const EvalResult full = eval_theorem2(P, lam, k_order);
    double est = std::abs(value - full.value) + full.est_error;
    if (kv.underflow) est = std::max(est, std::abs(value));
    return {value, est, EvalBranch::theorem2, k_order};
}

// Uniform evaluation with the two-point divided-difference coefficients
// (levels 0 and 1 only).  With k_order = 1 no further level exists, so the
// estimate extrapolates the observed level ratio; with k_order = 0 the
// omitted level-1 term is exact.
inline EvalResult eval_theorem1(const ProblemParams& P, double lam, int k_order = 1) {
    detail::check_uniform_preconditions(P, lam, "eval_theorem1");
    if (k_order < 0 || k_order > 1)
        throw contract_violation("eval_theorem1: k_order must lie in [0,1]");

    const SaddleData sd = alpha_param(P);
    const G0Series g = pk_coeffs(P, sd, 16);
    const BleisteinCoeffs ab = bleistein_AB(P, sd, g);

    const double chi = sd.alpha * std::sqrt(lam);
    const KernelValues kv = w_kernel(P.b, chi);
    const double pref = detail::lambda_prefactor(P.b, P.c, lam, sd.psi_s);
    const double lamb = std::pow(lam, -0.5 * P.b);
    const double wc = kv.w * lamb;
    const double wd = kv.w_prime * lamb / std::sqrt(lam);

    double sum_c = ab.A[0], sum_d = ab.B[0];
    if (k_order == 1) {
        sum_c += ab.A[1] / lam;
        sum_d += ab.B[1] / lam;
    }
    const double value = pref * (wc * sum_c + wd * sum_d);

    double est;
    if (k_order == 0) {
        est = pref * (std::abs(wc * ab.A[1]) + std::abs(wd * ab.B[1])) / lam;
    } else {
        const double rc = ab.A[0] != 0.0 ? std::abs(ab.A[1] / ab.A[0]) : 1.0;
        const double rd = ab.B[0] != 0.0 ? std::abs(ab.B[1] / ab.B[0]) : 1.0;
        est = pref *
              (std::abs(wc * ab.A[1]) * rc + std::abs(wd * ab.B[1]) * rd) /
              (lam * lam);
    }
    if (kv.underflow) est = std::max(est, std::abs(value));
    return {value, est, EvalBranch::theorem1, k_order};
}

// Limit form at the coalescence point: a single sum over gamma-function
// moments, K+1 terms.  Only defined inside the coalescence window; there it
// matches eval_theorem2 term for term (K = 2*k_order + 1).
inline EvalResult eval_coalescent(const ProblemParams& P, double lam, int K = 7) {
    detail::check_uniform_preconditions(P, lam, "eval_coalescent");
    if (K < 0 || K > 40) throw contract_violation("eval_coalescent: K must lie in [0,40]");

    const SaddleData sd = alpha_param(P);
    if (std::abs(sd.alpha) >= kDeltaSwitch)
        throw contract_violation(
            "eval_coalescent: called away from coalescence; use the uniform evaluators");

    const G0Series g = pk_coeffs(P, sd, std::max(4, K + 1));
    const double log_half_lam = std::log(0.5 * lam);
    auto moment = [&](int k) {
        // gamma((b+k)/2) / (lam/2)^((b+k)/2)
        const double h = 0.5 * (P.b + k);
        return std::exp(log_gamma(h) - h * log_half_lam);
    };
    double sum = 0.0;
    for (int k = 0; k <= K; ++k) sum += g.at_peak[k] * moment(k);

    const double front =
        gamma_ratio_G(P.b, P.c + lam) / (2.0 * std::exp(log_gamma(P.b)));
    const double value = front * sum;
    const double est = front * std::abs(g.at_peak[K + 1]) * moment(K + 1);
    return {value, est, EvalBranch::coalescent, K};
}

// Lifts b < 0 (non-integer) to positive second parameters with the exact
// three-term contiguous relation, applied to every term of the expansion at
// each round, ceil(-b) rounds in total.  Leaves are evaluated uniformly.
inline EvalResult eval_negative_b(const ProblemParams& P, double lam, int k_order = 3) {
    validate(P);
    if (!(P.b < 0.0))
        throw contract_violation("eval_negative_b: b is not negative");
    if (P.b == std::round(P.b))
        throw contract_violation(
            "eval_negative_b: negative integer b; use the polynomial evaluators");
    if (!(lam > 0.0)) throw domain_error("eval_negative_b: lambda must be positive");

    const int rounds = static_cast<int>(std::ceil(-P.b));
    std::map<int, double> weights{{0, 1.0}};
    for (int r = 0; r < rounds; ++r) {
        std::map<int, double> next;
        for (const auto& [off, w] : weights) {
            const double beta = P.b + off;
            const double den = lam + P.c - beta - 1.0;
            if (den == 0.0)
                throw domain_error("eval_negative_b: contiguous relation pole");
            const double big_a = (P.c - beta - 1.0) * P.eps * P.x -
                                 (P.a - beta - 1.0) * P.x - beta - 1.0;
            const double big_b = (1.0 + beta) * (1.0 - P.x);
            next[off + 1] += w * (1.0 - P.eps * P.x + big_a / den);
            next[off + 2] += w * big_b / den;
        }
        weights = std::move(next);
    }

    double value = 0.0, est = 0.0;
    for (const auto& [off, w] : weights) {
        ProblemParams leaf = P;
        leaf.b = P.b + off;
        const EvalResult r = eval_theorem2(leaf, lam, k_order);
        value += w * r.value;
        est += std::abs(w) * r.est_error;
    }
    return {value, est, EvalBranch::contiguous_reduction, k_order};
}

// Exact terminating value for second parameter -m, as the alternating
// binomial sum over the rational lambda factors T_r.  Computed in
// double-double throughout: near eps*x = 1 the sum cancels to O(1/lam) and
// plain doubles would surrender half their digits.
inline dd eval_poly_exact_dd(int m, const ProblemParams& P, double lam) {
    validate(P);
    if (m < 0) throw domain_error("eval_poly_exact: m must be non-negative");
    if (!(lam > 0.0)) throw domain_error("eval_poly_exact: lambda must be positive");

    const dd ex = ddops::two_prod(P.eps, P.x);
    dd sum(1.0);
    dd term(1.0);
    for (int r = 1; r <= m; ++r) {
        const double s = r - 1.0;
        if (lam + P.c + s == 0.0)
            throw domain_error("eval_poly_exact: pole in T_r");
        const dd numer = dd(1.0) + dd(P.a + s) / (dd(P.eps) * dd(lam));
        const dd denom = dd(1.0) + dd(P.c + s) / dd(lam);
        term = term * numer / denom;                       // T_(r-1) -> T_r
        term = term * dd(-(m - s)) / dd(static_cast<double>(r));  // binomial step
        term = term * ex;
        sum = sum + term;
    }
    return sum;
}

inline double eval_poly_exact(int m, const ProblemParams& P, double lam) {
    return eval_poly_exact_dd(m, P, lam).to_double();
}

namespace detail {

// Geometric guess for the next omitted term from the last two retained ones.
inline double next_term_guess(double first, double second, double lam) {
    if (second == 0.0) return 0.0;
    if (first == 0.0) return std::abs(second) / lam;
    return std::abs(second) * std::abs(second / first);
}

}  // namespace detail

// Two-term large-lambda forms for second parameter -m.  Away from eps*x = 1
// these are the X-polynomial corrections on (1-eps*x)^m; at coalescence the
// cancellation changes the leading power and the dedicated small-m forms are
// used.  The coalescent coefficients below come from expanding the exact
// finite sum in inverse powers of lambda; the tests re-derive them
// numerically from eval_poly_exact_dd.
inline EvalResult eval_poly_asym(int m, const ProblemParams& P, double lam) {
    validate(P);
    if (m < 0) throw domain_error("eval_poly_asym: m must be non-negative");
    if (!(lam > 0.0)) throw domain_error("eval_poly_asym: lambda must be positive");
    if (m == 0) return {1.0, 0.0, EvalBranch::polynomial_asym, 0};

    const double a = P.a, c = P.c, eps = P.eps;
    const double ex = eps * P.x;

    if (std::abs(ex - 1.0) < kDeltaSwitch) {
        if (m > 4)
            throw domain_error(
                "eval_poly_asym: coalescent forms are available for m <= 4 only");
        double first = 0.0, second = 0.0, value = 0.0;
        switch (m) {
            case 1: {
                const double lead = (eps * c - a) / (eps * lam);
                value = lead * (1.0 - c / lam + (c * c) / (lam * lam));
                first = -lead * c / lam;
                second = lead * (c * c) / (lam * lam);
                break;
            }
            case 2: {
                const double ups2 = a * (a + 1.0) - 2.0 * eps * a * (c + 1.0) -
                                    eps * (2.0 * c + 1.0) +
                                    eps * eps * (c * c + 3.0 * c + 1.0);
                first = -(eps - 1.0) / (eps * lam);
                second = ups2 / (eps * eps * lam * lam);
                value = first + second;
                break;
            }
            case 3: {
                const double ups3 =
                    a * (a + 1.0) * (a + 2.0) -
                    3.0 * eps * a * (a * (c + 2.0) + 5.0 + 4.0 * c) +
                    3.0 * eps * eps * a * (c + 1.0) * (c + 5.0) -
                    eps * (c + 1.0) *
                        (6.0 - 9.0 * eps * (c + 2.0) +
                         eps * eps * (12.0 + 11.0 * c + c * c));
                first = (eps - 1.0) * (2.0 + 3.0 * a - eps * (4.0 + 3.0 * c)) /
                        (eps * eps * lam * lam);
                second = -ups3 / (eps * eps * eps * lam * lam * lam);
                value = first + second;
                break;
            }
            case 4: {
                const double ups4 = 3.0 * a * a + 7.0 * a + 3.0 -
                                    2.0 * eps * (a * (7.0 + 3.0 * c) + 9.0 + 5.0 * c) +
                                    eps * eps * (18.0 + 17.0 * c + 3.0 * c * c);
                first = 3.0 * (eps - 1.0) * (eps - 1.0) / (eps * eps * lam * lam);
                second = -2.0 * (eps - 1.0) * ups4 /
                         (eps * eps * eps * lam * lam * lam);
                value = first + second;
                break;
            }
        }
        return {value, detail::next_term_guess(first, second, lam),
                EvalBranch::polynomial_asym, 2};
    }

    const double X = ex / (1.0 - ex);
    const double exi = 1.0 / ex;
    const double o01 = a - eps * c;
    const double o02 = 0.5 * (m - 1.0) * (eps - 1.0);
    const double o11 = a * a - eps * eps * c * c;
    const double o12 =
        o01 * o01 * (m - exi) - (m - 1.0) * (a - eps * eps * c);
    const double o13 = (m - 1.0) * (eps - 1.0) *
                       (o01 * (m - 2.0 * exi) -
                        (1.0 + eps) * (2.0 * m - 1.0 - 3.0 * exi) / 6.0);
    const double o14 = 0.25 * (m - 1.0) * (1.0 - eps) * (1.0 - eps) *
                       ((m - 1.0) * (m - 4.0 * exi) + 2.0 * exi * exi);

    const double t1 = -(m / (eps * lam)) * (o01 * X + o02 * X * X);
    const double t2 = (m / (2.0 * eps * eps * lam * lam)) *
                      (((o14 * X + o13) * X + o12) * X + o11) * X;
    const double shell = std::pow(1.0 - ex, static_cast<double>(m));
    const double value = shell * (1.0 + t1 + t2);
    const double est = std::abs(shell) * detail::next_term_guess(t1, t2, lam);
    return {value, est, EvalBranch::polynomial_asym, 2};
}

// Dispatch on parameter regime: polynomial for non-positive integer b,
// contiguous lift for other negative b, and the uniform expansion otherwise,
// relabelled as coalescent inside the window where the saddle data itself
// switches to its limit forms.
inline EvalResult eval_auto(const ProblemParams& P, double lam, int k_order = 3) {
    validate(P);
    if (P.b <= 0.0 && P.b == std::round(P.b)) {
        const int m = static_cast<int>(std::lround(-P.b));
        return {eval_poly_exact(m, P, lam), 0.0, EvalBranch::polynomial_exact, m};
    }
    if (P.b < 0.0) return eval_negative_b(P, lam, k_order);
    EvalResult r = eval_theorem2(P, lam, k_order);
    const SaddleData sd = alpha_param(P);
    if (std::abs(sd.alpha) < kDeltaSwitch) r.branch = EvalBranch::coalescent;
    return r;
}

}  // namespace hyperasym
