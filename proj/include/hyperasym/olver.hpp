#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "saddle.hpp"
#include "series.hpp"

namespace hyperasym {

// Taylor data of the slowly varying factor g_0 about the two distinguished
// points of the transformed integral: 'at_peak' holds p_k (powers of w,
// w = 0 at the interior peak) and 'at_origin' holds the recentred
// coefficients q_k (powers of u = w + alpha, u = 0 at the endpoint).
struct G0Series {
    TruncatedSeries at_peak;
    TruncatedSeries at_origin;
    double alpha = 0.0;
};

// Coefficient pairs (c_k, d_k): dense polynomials in chi, low order first.
// An empty vector is the zero polynomial.
struct CkDkPolys {
    double mu = 0.0;
    std::vector<std::vector<double>> c, d;

    static double coef(const std::vector<double>& poly, int j) {
        if (j < 0 || j >= static_cast<int>(poly.size())) return 0.0;
        return poly[static_cast<size_t>(j)];
    }
    int k_max() const { return static_cast<int>(c.size()) - 1; }
};

// All coefficients of the full expansion machinery for one (params, alpha):
// p_k plus the integer-power regrouped families.
struct OlverCoeffs {
    std::vector<double> p;
    std::vector<double> curlyC;
    std::vector<double> curlyD;
    int tail_depth = 0;  // fixed depth used, or -1 when chosen adaptively
};

inline constexpr int kAdaptiveTail = -1;

// Builds g_0 = f(x, t(w)) (t(w)/(w+alpha))^(b-1) dt/dw as a Taylor series
// in w, together with its recentring at the endpoint.  The linear-factor
// division uses a descending scheme for small |alpha| whose truncation bias
// decays like |alpha|^(K-k); the extra working margin added here pushes
// that bias below double rounding for every retained coefficient.
inline G0Series pk_coeffs(const ProblemParams& P, const SaddleData& sd, int order) {
    if (order < 4) throw contract_violation("pk_coeffs: order must be at least 4");
    if (order > 72) throw contract_violation("pk_coeffs: order above supported range");
    const int margin = (std::abs(sd.alpha) < 0.15) ? 24 : 2;
    const int K = order + margin + 1;

    const TruncatedSeries w = w_of_t_series(P, sd, K);
    const TruncatedSeries tau = ts_revert(w);         // t - t_s in powers of w
    const TruncatedSeries dtdw = ts_derivative(tau);  // order K-1

    // Amplitude (1-t)^(c-b-1) (1-xt)^(-a) as a series in t - t_s, then
    // composed with tau(w).
    TruncatedSeries lin1{0.0, std::vector<double>(static_cast<size_t>(K) + 1, 0.0)};
    TruncatedSeries lin2 = lin1;
    lin1.c[0] = 1.0 - sd.t_s;
    lin1.c[1] = -1.0;
    lin2.c[0] = 1.0 - P.x * sd.t_s;
    lin2.c[1] = -P.x;
    const TruncatedSeries amp =
        ts_mul(ts_pow_real(lin1, P.c - P.b - 1.0), ts_pow_real(lin2, -P.a));
    const TruncatedSeries f_of_w = ts_compose(amp, tau);

    TruncatedSeries t_full = tau;
    t_full.c[0] = sd.t_s;
    const TruncatedSeries ratio = ts_div_linear(t_full, sd.alpha);
    const TruncatedSeries ghat =
        ts_mul(ts_mul(f_of_w, ts_pow_real(ratio, P.b - 1.0)), dtdw);

    G0Series out;
    out.alpha = sd.alpha;
    out.at_peak = ts_truncate(ghat, order);
    out.at_origin = ts_truncate(ts_shift(ghat, -sd.alpha), order);
    return out;
}

// Polynomial pairs from the moment recurrence
//   S_k = -chi S_{k-1} + (b+k-2) S_{k-2} + chi (k-2) S_{k-3},
// run symbolically in chi over the seeds c_0 = 1, d_0 = 0, c_1 = 0, d_1 = 1.
inline CkDkPolys ckdk_polynomials(double b, int k_max) {
    if (k_max < 1 || k_max > 64)
        throw contract_violation("ckdk_polynomials: k_max must lie in [1, 64]");
    CkDkPolys out;
    out.mu = b - 1.0;
    out.c.resize(static_cast<size_t>(k_max) + 1);
    out.d.resize(static_cast<size_t>(k_max) + 1);
    out.c[0] = {1.0};
    out.d[0] = {};
    if (k_max >= 1) {
        out.c[1] = {};
        out.d[1] = {1.0};
    }
    auto step = [&](const std::vector<std::vector<double>>& f, int k) {
        std::vector<double> r(static_cast<size_t>(k) + 1, 0.0);
        const std::vector<double>& f1 = f[static_cast<size_t>(k - 1)];
        const std::vector<double>& f2 = f[static_cast<size_t>(k - 2)];
        for (size_t j = 0; j < f1.size(); ++j) r[j + 1] -= f1[j];
        for (size_t j = 0; j < f2.size(); ++j) r[j] += (b + k - 2) * f2[j];
        if (k >= 3) {
            const std::vector<double>& f3 = f[static_cast<size_t>(k - 3)];
            for (size_t j = 0; j < f3.size(); ++j) r[j + 1] += (k - 2) * f3[j];
        }
        while (!r.empty() && r.back() == 0.0) r.pop_back();
        return r;
    };
    for (int k = 2; k <= k_max; ++k) {
        out.c[static_cast<size_t>(k)] = step(out.c, k);
        out.d[static_cast<size_t>(k)] = step(out.d, k);
    }
    return out;
}

// Exact integer variant: coefficients are polynomials in mu = b - 1, stored
// as mu_poly[j][i] = integer coefficient of chi^j mu^i.  Restricted to
// small k where the integer growth stays far inside 64-bit range; used to
// pin the symbolic content of the pairs.
struct CkDkExact {
    std::vector<std::vector<std::vector<long long>>> c, d;
};

inline CkDkExact ckdk_exact(int k_max) {
    if (k_max < 1 || k_max > 16)
        throw contract_violation("ckdk_exact: k_max must lie in [1, 16]");
    using MuPoly = std::vector<long long>;
    using ChiPoly = std::vector<MuPoly>;
    CkDkExact out;
    out.c.resize(static_cast<size_t>(k_max) + 1);
    out.d.resize(static_cast<size_t>(k_max) + 1);
    out.c[0] = {{1}};
    out.d[0] = {};
    out.c[1] = {};
    out.d[1] = {{1}};
    auto acc = [](ChiPoly& r, size_t j, size_t i, long long v) {
        if (r.size() <= j) r.resize(j + 1);
        if (r[j].size() <= i) r[j].resize(i + 1, 0);
        r[j][i] += v;
    };
    auto step = [&](const std::vector<ChiPoly>& f, int k) {
        ChiPoly r;
        const ChiPoly& f1 = f[static_cast<size_t>(k - 1)];
        for (size_t j = 0; j < f1.size(); ++j)
            for (size_t i = 0; i < f1[j].size(); ++i) acc(r, j + 1, i, -f1[j][i]);
        // (b + k - 2) = mu + (k - 1)
        const ChiPoly& f2 = f[static_cast<size_t>(k - 2)];
        for (size_t j = 0; j < f2.size(); ++j)
            for (size_t i = 0; i < f2[j].size(); ++i) {
                acc(r, j, i + 1, f2[j][i]);
                acc(r, j, i, (k - 1) * f2[j][i]);
            }
        if (k >= 3) {
            const ChiPoly& f3 = f[static_cast<size_t>(k - 3)];
            for (size_t j = 0; j < f3.size(); ++j)
                for (size_t i = 0; i < f3[j].size(); ++i) acc(r, j + 1, i, (k - 2) * f3[j][i]);
        }
        return r;
    };
    for (int k = 2; k <= k_max; ++k) {
        out.c[static_cast<size_t>(k)] = step(out.c, k);
        out.d[static_cast<size_t>(k)] = step(out.d, k);
    }
    return out;
}

namespace detail {

// Structural parity of the pairs: c_k holds only chi-powers of k's parity,
// d_k only the opposite.  A violation would smuggle half-integer powers of
// lambda into the regrouped expansion, so it is a hard logic error.
inline void assert_ckdk_parity(const CkDkPolys& polys) {
    for (int k = 0; k <= polys.k_max(); ++k) {
        const auto& ck = polys.c[static_cast<size_t>(k)];
        const auto& dk = polys.d[static_cast<size_t>(k)];
        for (int j = 0; j < static_cast<int>(ck.size()); ++j)
            if (ck[static_cast<size_t>(j)] != 0.0 && ((k - j) % 2 != 0))
                throw contract_violation("ckdk parity violated in c_" + std::to_string(k));
        for (int j = 0; j < static_cast<int>(dk.size()); ++j)
            if (dk[static_cast<size_t>(j)] != 0.0 && ((k - 1 - j) % 2 != 0))
                throw contract_violation("ckdk parity violated in d_" + std::to_string(k));
    }
}

// One regrouped coefficient: sum over the tail index j of
// p_{base+j} * [chi^j](poly_{base+j}) * alpha^j.  With depth < 0 the tail
// is cut adaptively: at negligible contribution, or at the smallest term
// once the (asymptotic) tail starts growing.
inline double regroup_one(const std::vector<double>& p, const CkDkPolys& polys,
                          double alpha, int base, bool use_c, int depth) {
    const int avail = std::min(static_cast<int>(p.size()) - 1, polys.k_max()) - base;
    if (depth >= 0 && avail < depth)
        throw contract_violation(
            "regroup_CD: need coefficients through order " + std::to_string(base + depth) +
            " but only " + std::to_string(base + avail) + " are available");
    const int j_max = depth >= 0 ? depth : avail;
    double sum = 0.0, apow = 1.0;
    double best_sum = 0.0, best_mag = -1.0;
    int grow = 0, tiny = 0;
    for (int j = 0; j <= j_max; ++j) {
        const int k = base + j;
        const auto& poly = use_c ? polys.c[static_cast<size_t>(k)] : polys.d[static_cast<size_t>(k)];
        const double term = p[static_cast<size_t>(k)] * CkDkPolys::coef(poly, j) * apow;
        sum += term;
        apow *= alpha;
        if (depth < 0) {
            const double mag = std::abs(term);
            if (best_mag < 0.0 || mag < best_mag) {
                best_mag = mag;
                best_sum = sum;
                grow = 0;
            } else if (++grow >= 3) {
                return best_sum;  // tail diverging: stop at its smallest term
            }
            if (mag <= 1e-16 * std::abs(sum)) {
                if (++tiny >= 2) return sum;
            } else {
                tiny = 0;
            }
        }
    }
    return sum;
}

}  // namespace detail

// Gathers the half-integer ladder p_k S_k(alpha sqrt(lambda)) lambda^(-k/2)
// into integer powers of 1/lambda in front of S_0 and S_1.  The chi-power
// extracted from each pair has k's parity, so every emitted power is a true
// integer; parity is asserted structurally before use.
inline OlverCoeffs regroup_CD(const std::vector<double>& p, const CkDkPolys& polys,
                              double alpha, int m_max, int tail_depth = 6) {
    if (m_max < 0) throw contract_violation("regroup_CD: m_max must be nonnegative");
    detail::assert_ckdk_parity(polys);
    OlverCoeffs out;
    out.p = p;
    out.tail_depth = tail_depth;
    out.curlyC.resize(static_cast<size_t>(m_max) + 1);
    out.curlyD.resize(static_cast<size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m) {
        out.curlyC[static_cast<size_t>(m)] =
            detail::regroup_one(p, polys, alpha, 2 * m, true, tail_depth);
        out.curlyD[static_cast<size_t>(m)] =
            detail::regroup_one(p, polys, alpha, 2 * m + 1, false, tail_depth);
    }
    return out;
}

}  // namespace hyperasym
