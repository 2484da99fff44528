#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperasym/harness.hpp"

using namespace hyperasym;

namespace {

const std::map<std::string, Method> kMethodNames{
    {"t1", Method::t1},
    {"t2", Method::t2},
    {"coalescent", Method::coalescent},
    {"auto", Method::auto_dispatch},
};
const std::map<std::string, ReportFormat> kFormatNames{
    {"csv", ReportFormat::csv},
    {"pretty", ReportFormat::pretty},
};
const std::map<std::string, OracleMode> kPrecisionNames{
    {"standard", OracleMode::standard},
    {"extended", OracleMode::extended},
};

int fail_usage(const std::string& msg) {
    std::cerr << "hyperasym: " << msg << '\n';
    return 2;
}

double parse_double(const std::string& s) {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size())
        throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

int parse_int(const std::string& s) {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size())
        throw std::invalid_argument("bad integer '" + s + "'");
    return v;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_double(item));
    return out;
}

template <typename T>
T parse_choice(const std::map<std::string, T>& names, const std::string& s,
               const char* what) {
    const auto it = names.find(s);
    if (it == names.end())
        throw std::invalid_argument(std::string("unknown ") + what + " '" + s + "'");
    return it->second;
}

// Defaults from the HYPERASYM_CONFIG key=value file; command-line flags are
// applied afterwards and win.
void apply_config(const std::map<std::string, std::string>& kv, RunSpec& spec,
                  std::vector<double>& xs, std::string& output) {
    for (const auto& [key, val] : kv) {
        if (key == "a") spec.params.a = parse_double(val);
        else if (key == "b") spec.params.b = parse_double(val);
        else if (key == "c") spec.params.c = parse_double(val);
        else if (key == "eps") spec.params.eps = parse_double(val);
        else if (key == "x") xs = parse_list(val);
        else if (key == "lambda") spec.lambda_list = parse_list(val);
        else if (key == "k-order") spec.k_order = parse_int(val);
        else if (key == "method") spec.method = parse_choice(kMethodNames, val, "method");
        else if (key == "m") spec.m = parse_int(val);
        else if (key == "tail-depth") spec.tail_depth = parse_int(val);
        else if (key == "precision")
            spec.precision = parse_choice(kPrecisionNames, val, "precision");
        else if (key == "format")
            spec.format = parse_choice(kFormatNames, val, "format");
        else if (key == "output") output = val;
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    RunSpec spec;
    std::vector<double> xs;
    std::string output;

    if (const char* env = std::getenv("HYPERASYM_CONFIG")) {
        std::ifstream cfg(env);
        if (!cfg) return fail_usage(std::string("cannot read config file ") + env);
        try {
            apply_config(parse_config(cfg), spec, xs, output);
        } catch (const std::exception& e) {
            return fail_usage(std::string("config: ") + e.what());
        }
    }

    CLI::App app{
        "Evaluator for F(a+eps*lambda, b; c+lambda; x) at large lambda:\n"
        "uniform expansions through the eps*x = 1 transition, terminating\n"
        "forms, and regeneration of the bundled reference tables."};
    app.require_subcommand(1);

    app.add_option("--a", spec.params.a, "first numerator parameter");
    app.add_option("--b", spec.params.b, "fixed numerator parameter");
    app.add_option("--c", spec.params.c, "denominator parameter offset");
    app.add_option("--eps", spec.params.eps, "ratio of the growing parameters (> 1)");
    app.add_option("--x", xs, "argument in (0,1); a comma list forms a sweep grid")
        ->delimiter(',');
    app.add_option("--lambda", spec.lambda_list,
                   "large-parameter values (comma list)")
        ->delimiter(',');
    app.add_option("--k-order", spec.k_order,
                   "expansion order; method default when omitted");
    app.add_option("--method", spec.method,
                   "t1 (two-point), t2 (regrouped), coalescent, auto")
        ->transform(CLI::CheckedTransformer(kMethodNames, CLI::ignore_case));
    app.add_option("--m", spec.m, "terminating second parameter -m (exact sum)");
    app.add_option("--tail-depth", spec.tail_depth,
                   "regrouping tail depth; -1 = adaptive");
    app.add_option("--precision", spec.precision,
                   "reference summation: standard or extended")
        ->transform(CLI::CheckedTransformer(kPrecisionNames, CLI::ignore_case));
    app.add_option("--format", spec.format, "csv or pretty")
        ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));
    app.add_option("--output", output, "write the report to this file");

    struct {
        const char* name;
        const char* help;
        Command command;
    } const commands[] = {
        {"eval", "evaluate at the given parameters, one row per lambda",
         Command::eval},
        {"coeffs", "dump saddle data and expansion coefficients", Command::coeffs},
        {"table2", "amplitude coefficients p_k at and off coalescence",
         Command::table2},
        {"table3", "two-point relative-error grid (level one)", Command::table3},
        {"table4", "regrouped relative-error grid (level three)", Command::table4},
        {"sweep", "relative errors over user grids of x and lambda",
         Command::sweep},
    };
    for (const auto& c : commands)
        app.add_subcommand(c.name, c.help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    for (const auto& c : commands)
        if (app.got_subcommand(c.name)) spec.command = c.command;
    if (!xs.empty()) {
        spec.params.x = xs.front();
        spec.x_list = xs;
    }

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!output.empty()) {
        file.open(output);
        if (!file) return fail_usage("cannot open output file " + output);
        os = &file;
    }

    try {
        const int rc = run(spec, *os);
        os->flush();
        return rc;
    } catch (const std::exception& e) {
        return fail_usage(e.what());
    }
}
