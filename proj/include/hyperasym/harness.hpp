#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "bleistein.hpp"
#include "engine.hpp"
#include "oracle.hpp"

// Report layer shared by the command-line tool and its tests.  Everything
// here is deterministic: fixed grids, fixed row order, snprintf formatting.

namespace hyperasym {

enum class Command { eval, coeffs, table2, table3, table4, sweep };
enum class Method { t1, t2, coalescent, auto_dispatch };
enum class ReportFormat { csv, pretty };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::t1: return "t1";
        case Method::t2: return "t2";
        case Method::coalescent: return "coalescent";
        case Method::auto_dispatch: return "auto";
    }
    return "?";
}

// One resolved invocation.  Empty grids mean "command default": the bundled
// reference grid for the table commands, a single lambda = 100 for eval.
struct RunSpec {
    Command command = Command::eval;
    ProblemParams params;           // reference-family defaults
    std::vector<double> lambda_list;
    std::vector<double> x_list;     // sweep only; other commands use params.x
    int k_order = -1;               // negative: method default
    Method method = Method::auto_dispatch;
    int m = -1;                     // >= 0: terminating second parameter -m
    int tail_depth = kAdaptiveTail;
    OracleMode precision = OracleMode::standard;
    ReportFormat format = ReportFormat::csv;
};

// Evaluation grid of the bundled reference error tables.
inline const std::vector<double>& grid_x() {
    static const std::vector<double> g{0.70, 0.60, 0.55, 0.50, 0.45, 0.40, 0.30};
    return g;
}
inline const std::vector<double>& grid_lambda() {
    static const std::vector<double> g{10.0, 20.0, 50.0, 100.0, 200.0};
    return g;
}

// 17 significant digits: a double survives the text round-trip bit-for-bit.
inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// key=value lines; '#' starts a comment, blank lines are skipped.  Values
// keep internal commas (list syntax), surrounding whitespace is trimmed.
inline std::map<std::string, std::string> parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        if (!key.empty()) kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

namespace detail {

inline const char* value_columns() {
    return "x,lambda,method,k_order,value,oracle,rel_err,branch";
}

inline void emit_value_header(std::ostream& os, ReportFormat f) {
    if (f == ReportFormat::csv) {
        os << value_columns() << '\n';
    } else {
        char line[192];
        std::snprintf(line, sizeof line, "%-8s %-8s %-11s %-7s %-25s %-25s %-12s %s\n",
                      "x", "lambda", "method", "k_order", "value", "oracle",
                      "rel_err", "branch");
        os << line;
    }
}

inline void emit_value_row(std::ostream& os, ReportFormat f, double x, double lam,
                           const char* method, int k, double value, double oracle,
                           double rel, const char* branch) {
    if (f == ReportFormat::csv) {
        os << format_full(x) << ',' << format_full(lam) << ',' << method << ','
           << k << ',' << format_full(value) << ',' << format_full(oracle) << ','
           << format_full(rel) << ',' << branch << '\n';
    } else {
        char line[256];
        std::snprintf(line, sizeof line,
                      "%-8g %-8g %-11s %-7d %-25.17g %-25.17g %-12.3e %s\n", x,
                      lam, method, k, value, oracle, rel, branch);
        os << line;
    }
}

struct CellOutcome {
    EvalResult r{};
    double oracle = std::numeric_limits<double>::quiet_NaN();
    bool value_ok = false;
    bool oracle_ok = false;
};

// One grid cell: requested evaluation plus the series reference.  Failures
// are recorded, not rethrown; the caller reports them per row.
inline CellOutcome evaluate_cell(const RunSpec& spec, const ProblemParams& P,
                                 double lam) {
    CellOutcome out;
    try {
        if (spec.m >= 0) {
            out.r = {eval_poly_exact(spec.m, P, lam), 0.0,
                     EvalBranch::polynomial_exact, spec.m};
        } else if (spec.command == Command::table4) {
            out.r = eval_theorem2_capped(P, lam, spec.k_order < 0 ? 3 : spec.k_order);
        } else {
            switch (spec.method) {
                case Method::t1:
                    out.r = eval_theorem1(P, lam, spec.k_order < 0 ? 1 : spec.k_order);
                    break;
                case Method::t2:
                    out.r = eval_theorem2(P, lam, spec.k_order < 0 ? 3 : spec.k_order,
                                          spec.tail_depth);
                    break;
                case Method::coalescent:
                    out.r = eval_coalescent(P, lam, spec.k_order < 0 ? 7 : spec.k_order);
                    break;
                case Method::auto_dispatch:
                    out.r = eval_auto(P, lam, spec.k_order < 0 ? 3 : spec.k_order);
                    break;
            }
        }
        out.value_ok = true;
    } catch (const std::exception&) {
    }
    try {
        OracleConfig cfg;
        cfg.mode = spec.precision;
        const double B = spec.m >= 0 ? -static_cast<double>(spec.m) : P.b;
        out.oracle = gauss_series_2f1(P.a + P.eps * lam, B, P.c + lam, P.x, cfg).value;
        out.oracle_ok = true;
    } catch (const std::exception&) {
    }
    return out;
}

inline int run_value_table(const RunSpec& spec, std::ostream& os,
                           const std::vector<double>& xs,
                           const std::vector<double>& lams) {
    emit_value_header(os, spec.format);
    const char* method = spec.m >= 0 ? "poly" : to_string(spec.method);
    bool flagged = false;
    for (const double x : xs) {
        for (const double lam : lams) {
            ProblemParams P = spec.params;
            P.x = x;
            const CellOutcome c = evaluate_cell(spec, P, lam);
            const double nan = std::numeric_limits<double>::quiet_NaN();
            const double value = c.value_ok ? c.r.value : nan;
            const double oracle = c.oracle_ok ? c.oracle : nan;
            const double rel = c.value_ok && c.oracle_ok && c.oracle != 0.0
                                   ? std::abs(value - oracle) / std::abs(oracle)
                                   : nan;
            flagged = flagged || !c.value_ok || !c.oracle_ok;
            emit_value_row(os, spec.format, x, lam, method,
                           c.value_ok ? c.r.k_order : spec.k_order, value, oracle,
                           rel, c.value_ok ? to_string(c.r.branch) : "error");
        }
    }
    return flagged ? 3 : 0;
}

inline int run_table2(const RunSpec& spec, std::ostream& os) {
    const int k_max = spec.k_order < 0 ? 7 : spec.k_order;
    if (k_max > 40)
        throw contract_violation("run: table2 supports k_order <= 40");
    ProblemParams P = spec.params;
    ProblemParams P0 = spec.params;
    P0.x = 1.0 / P0.eps;
    const G0Series g = pk_coeffs(P, alpha_param(P), std::max(4, k_max + 1));
    const G0Series g0 = pk_coeffs(P0, alpha_param(P0), std::max(4, k_max + 1));
    if (spec.format == ReportFormat::csv) {
        os << "k,p_alpha,p_coalescent\n";
        for (int k = 0; k <= k_max; ++k)
            os << k << ',' << format_full(g.at_peak[k]) << ','
               << format_full(g0.at_peak[k]) << '\n';
    } else {
        char line[128];
        std::snprintf(line, sizeof line, "%-4s %-25s %s\n", "k", "p_alpha",
                      "p_coalescent");
        os << line;
        for (int k = 0; k <= k_max; ++k) {
            std::snprintf(line, sizeof line, "%-4d %-25.17g %.17g\n", k,
                          g.at_peak[k], g0.at_peak[k]);
            os << line;
        }
    }
    return 0;
}

inline int run_coeffs(const RunSpec& spec, std::ostream& os) {
    const int m_max = spec.k_order < 0 ? 3 : spec.k_order;
    if (m_max > 8)
        throw contract_violation("run: coeffs supports k_order <= 8");
    const ProblemParams& P = spec.params;
    if (!(P.b > 0.0))
        throw domain_error("run: coeffs requires b > 0");
    const SaddleData sd = alpha_param(P);
    constexpr int kWorkOrder = 48;
    const G0Series g = pk_coeffs(P, sd, kWorkOrder);
    const CkDkPolys polys = ckdk_polynomials(P.b, kWorkOrder);
    const OlverCoeffs oc =
        regroup_CD(g.at_peak.c, polys, sd.alpha, m_max, spec.tail_depth);
    const BleisteinCoeffs ab = bleistein_AB(P, sd, g);

    const bool csv = spec.format == ReportFormat::csv;
    auto row = [&](const char* quantity, int k, double v) {
        if (csv) {
            os << quantity << ',' << k << ',' << format_full(v) << '\n';
        } else {
            char line[96];
            std::snprintf(line, sizeof line, "%-12s %-4d %.17g\n", quantity, k, v);
            os << line;
        }
    };
    if (csv)
        os << "quantity,k,value\n";
    else
        os << "quantity     k    value\n";
    row("alpha", 0, sd.alpha);
    row("psi_s", 0, sd.psi_s);
    row("t_s", 0, sd.t_s);
    const int p_top = std::max(7, 2 * m_max + 1);
    for (int k = 0; k <= p_top; ++k) row("p", k, g.at_peak[k]);
    for (int k = 0; k <= m_max; ++k)
        row("curly_c", k, oc.curlyC[static_cast<size_t>(k)]);
    for (int k = 0; k <= m_max; ++k)
        row("curly_d", k, oc.curlyD[static_cast<size_t>(k)]);
    for (int k = 0; k <= 1; ++k) row("bleistein_a", k, ab.A[static_cast<size_t>(k)]);
    for (int k = 0; k <= 1; ++k) row("bleistein_b", k, ab.B[static_cast<size_t>(k)]);
    return 0;
}

}  // namespace detail

// Executes one resolved run spec, writing the report to `os`.  Returns 0, or
// 3 when some cell could not be evaluated or checked (rows are still
// emitted, with nan fields).  Spec-level misuse throws domain_error /
// contract_violation; the tool maps those to the usage exit code.
inline int run(const RunSpec& spec, std::ostream& os) {
    validate(spec.params);
    if (spec.k_order > 8 && spec.command != Command::table2)
        throw contract_violation("run: k_order above supported range");
    if ((spec.method == Method::t1 || spec.command == Command::table3) &&
        spec.k_order > 1)
        throw contract_violation("run: the two-point method supports k_order <= 1");
    if (spec.m < -1)
        throw contract_violation("run: m must be non-negative when given");
    for (const double lam : spec.lambda_list)
        if (!(lam > 0.0)) throw domain_error("run: lambda values must be positive");
    for (const double x : spec.x_list)
        if (!(x > 0.0 && x < 1.0))
            throw domain_error("run: sweep x values must lie in (0,1)");

    const std::vector<double> one_lambda{100.0};
    const auto& lams = spec.lambda_list.empty()
                           ? (spec.command == Command::eval ? one_lambda
                                                            : grid_lambda())
                           : spec.lambda_list;
    switch (spec.command) {
        case Command::eval:
            return detail::run_value_table(spec, os, {spec.params.x}, lams);
        case Command::sweep: {
            const auto& xs = spec.x_list.empty() ? grid_x() : spec.x_list;
            return detail::run_value_table(spec, os, xs, lams);
        }
        case Command::table3: {
            RunSpec s = spec;
            s.method = Method::t1;
            if (s.k_order < 0) s.k_order = 1;
            s.precision = OracleMode::extended;
            return detail::run_value_table(s, os, grid_x(), lams);
        }
        case Command::table4: {
            RunSpec s = spec;
            s.method = Method::t2;
            if (s.k_order < 0) s.k_order = 3;
            s.precision = OracleMode::extended;
            return detail::run_value_table(s, os, grid_x(), lams);
        }
        case Command::table2:
            return detail::run_table2(spec, os);
        case Command::coeffs:
            return detail::run_coeffs(spec, os);
    }
    return 0;
}

}  // namespace hyperasym
