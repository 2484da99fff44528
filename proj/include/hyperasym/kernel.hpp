#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"

namespace hyperasym {

namespace detail {

// Lanczos series, g = 607/128, 15 terms: ~1e-15 relative accuracy on the
// right half line.
inline double lanczos_ser(double z) {
    static constexpr double cof[14] = {
        57.156235665862923517,     -59.597960355475491248,
        14.136097974741747174,     -0.49191381609762019978,
        0.33994649984811888699e-4, 0.46523628927048575665e-4,
        -0.98374475304879564677e-4, 0.15808870322491248884e-3,
        -0.21026444172410488319e-3, 0.21743961811521264320e-3,
        -0.16431810653676389022e-3, 0.84418223983852743293e-4,
        -0.26190838401581408670e-4, 0.36899182659531622704e-5};
    double ser = 0.999999999999997092;
    double y = z;
    for (const double c : cof) ser += c / ++y;
    return ser;
}

}  // namespace detail

inline double log_gamma(double z) {
    if (!(z > 0.0)) throw domain_error("log_gamma: argument must be positive");
    const double t = z + 5.2421875;  // z + g + 1/2
    return (z + 0.5) * std::log(t) - t +
           std::log(2.5066282746310005 * detail::lanczos_ser(z) / z);
}

// Ratio G = Gamma(z) / Gamma(z - b), evaluated from the Lanczos difference
// so the two large log-gamma values never cancel: the result keeps full
// relative accuracy even when z is large and b moderate.
inline double gamma_ratio_G(double b, double z) {
    if (!(z > 0.0 && z - b > 0.0))
        throw domain_error("gamma_ratio_G: both gamma arguments must be positive");
    const double t2 = z - b + 5.2421875;
    const double log_ratio = (z + 0.5) * std::log1p(b / t2) + b * std::log(t2) - b +
                             std::log(detail::lanczos_ser(z) * (z - b) /
                                      (detail::lanczos_ser(z - b) * z));
    return std::exp(log_ratio);
}

// Leading coefficients of the large-z expansion
//   Gamma(z + c)/Gamma(z + c - b) = z^b (1 + h1/z + h2/z^2 + ...),
// exposed for cross-checks of gamma_ratio_G.
inline double gamma_ratio_h1(double b, double c) { return 0.5 * b * (2.0 * c - b - 1.0); }
inline double gamma_ratio_h2(double b, double c) {
    const double m = 2.0 * c - b - 1.0;
    return b * (b - 1.0) / 24.0 * (3.0 * m * m - b - 1.0);
}

namespace detail {

struct QuadOutcome {
    double value = 0.0;
    double l1 = 0.0;        // integral of |g|, same discretisation
    double last_diff = 0.0;
    bool converged = false;
};

// Trapezoidal refinement of a double-exponentially transformed integrand
// g(y) over [y_lo, y_hi].  Levels double the node count and reuse previous
// sums; convergence is declared when two successive levels agree to
// rel_tol, with an absolute floor tied to the L1 mass so near-cancelling
// integrals terminate too.
template <class G>
QuadOutcome de_refine(G&& g, double y_lo, double y_hi, double rel_tol, int max_level) {
    QuadOutcome out;
    double h = 0.5;
    double sum = 0.0, asum = 0.0;
    for (double y = y_lo; y <= y_hi + 1e-12; y += h) {
        const double v = g(y);
        sum += v;
        asum += std::abs(v);
    }
    double integ = sum * h, l1 = asum * h;
    for (int lev = 1; lev <= max_level; ++lev) {
        h *= 0.5;
        double add = 0.0, aadd = 0.0;
        for (double y = y_lo + h; y < y_hi; y += 2.0 * h) {
            const double v = g(y);
            add += v;
            aadd += std::abs(v);
        }
        const double next = 0.5 * integ + h * add;
        const double next_l1 = 0.5 * l1 + h * aadd;
        out.last_diff = std::abs(next - integ);
        integ = next;
        l1 = next_l1;
        if (lev >= 3 &&
            (out.last_diff <= rel_tol * std::abs(integ) || out.last_diff <= 1e-15 * l1)) {
            out.converged = true;
            break;
        }
    }
    out.value = integ;
    out.l1 = l1;
    return out;
}

// Integrand tau^(b-1) (tau-chi)^k exp(-(tau-chi)^2/2) / Gamma(b), assembled
// in log space so extreme tails underflow gracefully.
struct KernelIntegrand {
    double b, chi, lgb;
    int k;
    double operator()(double tau) const {
        if (!(tau > 0.0)) return 0.0;
        const double d = tau - chi;
        const double e = (b - 1.0) * std::log(tau) - 0.5 * d * d - lgb;
        if (e < -745.0) return 0.0;
        double p = 1.0;
        for (int i = 0; i < k; ++i) p *= d;
        return p * std::exp(e);
    }
};

// Split point: the interior maximum of tau^(b-1) exp(-(tau-chi)^2/2) when
// it exists, otherwise a point just right of the surviving mass.
inline double split_point(double b, double chi) {
    const double disc = chi * chi + 4.0 * (b - 1.0);
    if (disc > 0.0) {
        const double root = 0.5 * (chi + std::sqrt(disc));
        if (root > 0.0) return root;
    }
    return std::max(chi, 0.0) + 1.0;
}

inline double sk_integral(double b, double chi, int k, double rel_tol, int max_level) {
    const KernelIntegrand f{b, chi, log_gamma(b), k};
    const double s = split_point(b, chi);

    // (0, s): tanh-sinh with the map tau = s * logistic(pi sinh y); the
    // left end absorbs the tau^(b-1) singularity, so the range must reach
    // far enough for tau^b itself to underflow the tolerance.
    const double y_left = std::asinh(48.0 / (3.141592653589793 * std::min(b, 1.0)));
    const double y_right = std::asinh(48.0 / 3.141592653589793);
    auto finite = [&](double y) {
        const double v = 3.141592653589793 * std::sinh(y);
        const double jac_base = 3.141592653589793 * std::cosh(y) * s;
        double tau, jac;
        if (v >= 0.0) {
            const double q = std::exp(-v);
            tau = s / (1.0 + q);
            jac = jac_base * q / ((1.0 + q) * (1.0 + q));
        } else {
            const double q = std::exp(v);
            tau = s * q / (1.0 + q);
            jac = jac_base * q / ((1.0 + q) * (1.0 + q));
        }
        return (jac > 0.0 && tau > 0.0) ? f(tau) * jac : 0.0;
    };
    QuadOutcome head = de_refine(finite, -y_left, y_right, rel_tol, max_level);

    // (s, inf): exp-sinh, tau = s + exp(pi sinh y).
    auto tail = [&](double y) {
        const double v = 3.141592653589793 * std::sinh(y);
        if (v > 60.0) return 0.0;  // tau so large the Gaussian is zero
        const double g = std::exp(v);
        return f(s + g) * 3.141592653589793 * std::cosh(y) * g;
    };
    QuadOutcome rest = de_refine(tail, -3.6, 3.1, rel_tol, max_level);

    if (!head.converged || !rest.converged) {
        const double scale = std::max(std::abs(head.value + rest.value), 1e-300);
        const double achieved = (head.last_diff + rest.last_diff) / scale;
        throw accuracy_error("kernel quadrature did not reach the requested tolerance",
                             achieved);
    }
    return head.value + rest.value;
}

}  // namespace detail

struct KernelValues {
    double chi = 0.0;
    double w = 0.0;        // S_0: the kernel itself
    double w_prime = 0.0;  // S_1: its chi-derivative
    bool underflow = false;
};

// Moments S_k(chi) = (1/Gamma(b)) int_0^inf tau^(b-1) (tau-chi)^k
// exp(-(tau-chi)^2/2) dtau by double-exponential quadrature.
inline double s_k_quadrature(double b, double chi, int k, double rel_tol = 1e-14) {
    if (!(b > 0.0)) throw domain_error("s_k_quadrature: b must be positive");
    if (k < 0 || k > 12) throw contract_violation("s_k_quadrature: k must lie in [0, 12]");
    if (!(std::abs(chi) <= 35.0))
        throw domain_error("s_k_quadrature: |chi| too large for direct quadrature");
    return detail::sk_integral(b, chi, k, rel_tol, 12);
}

// Kernel value and derivative.  For chi < -30 the integral lies below any
// representable relative scale; a certified upper bound is returned and
// flagged instead of attempting quadrature.
inline KernelValues w_kernel(double b, double chi, double rel_tol = 1e-14) {
    if (!(b > 0.0)) throw domain_error("w_kernel: b must be positive");
    KernelValues kv;
    kv.chi = chi;
    if (chi < -30.0) {
        // (tau - chi)^2/2 >= chi^2/2 + |chi| tau bounds the Gaussian by a
        // decaying exponential whose moments are explicit.
        const double a = std::abs(chi);
        const double eh = std::exp(-0.5 * chi * chi);
        kv.w = eh * std::pow(a, -b);
        kv.w_prime = eh * (b * std::pow(a, -b - 1.0) + std::pow(a, 1.0 - b));
        kv.underflow = true;
        return kv;
    }
    kv.w = s_k_quadrature(b, chi, 0, rel_tol);
    kv.w_prime = s_k_quadrature(b, chi, 1, rel_tol);
    return kv;
}

// Forward recurrence S_k = -chi S_{k-1} + (b+k-2) S_{k-2} + chi (k-2) S_{k-3}
// seeded by quadrature values of S_0 and S_1.
inline std::vector<double> s_k_recurrence(double b, double chi, int k_max, double s0, double s1) {
    if (k_max < 1) throw contract_violation("s_k_recurrence: k_max must be >= 1");
    std::vector<double> s(static_cast<size_t>(k_max) + 1);
    s[0] = s0;
    s[1] = s1;
    for (int k = 2; k <= k_max; ++k)
        s[static_cast<size_t>(k)] = -chi * s[static_cast<size_t>(k - 1)] +
                                    (b + k - 2) * s[static_cast<size_t>(k - 2)] +
                                    (k >= 3 ? chi * (k - 2) * s[static_cast<size_t>(k - 3)] : 0.0);
    return s;
}

}  // namespace hyperasym
