#pragma once

#include <cmath>
#include <cstdint>

#include "double_double.hpp"
#include "errors.hpp"

namespace hyperasym {

enum class OracleMode { standard, extended };

struct OracleConfig {
    OracleMode mode = OracleMode::standard;
    // 0 selects the mode default: ~2e-18 in standard (compensated double),
    // ~1e-33 in extended (double-double).
    double rel_tol = 0.0;
    std::int64_t max_terms = 2'000'000;
};

struct OracleResult {
    double value = 0.0;
    dd value_ext;  // populated in extended mode
    std::int64_t terms = 0;
    OracleMode mode = OracleMode::standard;
};

// Direct summation of the Gauss series sum_n (A)_n (B)_n / ((C)_n n!) x^n.
// Terms are built by the ratio recurrence; summation stops once the term
// ratio has dropped below one (past the hump that large A produces) and the
// term itself is negligible against the running sum.
inline OracleResult gauss_series_2f1(double A, double B, double C, double x,
                                     OracleConfig cfg = {}) {
    if (!(x >= 0.0 && x <= 0.95))
        throw domain_error("gauss_series_2f1: x must lie in [0, 0.95]");
    if (!(C > 0.0)) throw domain_error("gauss_series_2f1: C must be positive");
    const double tol =
        cfg.rel_tol > 0.0 ? cfg.rel_tol
                          : (cfg.mode == OracleMode::standard ? 2e-18 : 1e-33);

    OracleResult out;
    out.mode = cfg.mode;

    if (cfg.mode == OracleMode::standard) {
        double sum = 1.0, comp = 0.0, term = 1.0, prev = 1.0;
        for (std::int64_t n = 0; n < cfg.max_terms; ++n) {
            const double dn = static_cast<double>(n);
            term *= (A + dn) * (B + dn) / ((C + dn) * (1.0 + dn)) * x;
            if (term == 0.0) {  // terminating (polynomial) series
                out.terms = n + 1;
                out.value = sum + comp;
                return out;
            }
            const double t = sum + term;
            comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
            sum = t;
            const bool decaying = std::abs(term) < std::abs(prev);
            prev = term;
            if (decaying && std::abs(term) <= tol * std::abs(sum)) {
                out.terms = n + 1;
                out.value = sum + comp;
                return out;
            }
        }
        throw accuracy_error("gauss_series_2f1: series did not converge",
                             std::abs(prev) / std::max(std::abs(sum), 1e-300));
    }

    dd sum(1.0), term(1.0);
    double prev = 1.0;
    for (std::int64_t n = 0; n < cfg.max_terms; ++n) {
        const double dn = static_cast<double>(n);
        term = term * (A + dn) * dd(x) * (B + dn) / (C + dn) / (1.0 + dn);
        const double tmag = term.to_double();
        if (tmag == 0.0) {
            out.terms = n + 1;
            out.value_ext = sum;
            out.value = sum.to_double();
            return out;
        }
        sum = sum + term;
        const bool decaying = std::abs(tmag) < std::abs(prev);
        prev = tmag;
        if (decaying && std::abs(tmag) <= tol * std::abs(sum.to_double())) {
            out.terms = n + 1;
            out.value_ext = sum;
            out.value = sum.to_double();
            return out;
        }
    }
    throw accuracy_error("gauss_series_2f1: series did not converge",
                         std::abs(prev) / std::max(std::abs(sum.to_double()), 1e-300));
}

}  // namespace hyperasym
