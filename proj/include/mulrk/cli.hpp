#pragma once

#include "mulrk/hybrid.hpp"
#include "mulrk/ivp.hpp"
#include "mulrk/problems.hpp"
#include "mulrk/table.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mulrk::cli {

enum class Command { solve, compare, convergence, bench, list_problems, validate_tableau };

enum class Format { csv, json };

struct RunConfig {
    Command command = Command::solve;
    std::optional<std::string> problem;
    std::optional<std::string> mrhs;
    std::optional<std::string> orhs;
    double x0 = 0.0;
    std::string y0 = "1";
    std::optional<double> h;
    std::optional<double> x_end;
    Method method = Method::mrk4;
    bool hybrid = false;
    HybridConfig hybrid_cfg;
    std::optional<std::string> tableau_path;
    std::optional<std::string> builtin_tableau;
    std::optional<std::string> output;
    Format format = Format::csv;
    ParamMap params;
    std::size_t component = 0;
    int levels = 3;
    std::vector<Method> methods{Method::mrk4, Method::rk4};
    std::vector<double> h_list;
    int repeats = 5;
    int threads = 1;
    std::vector<std::string> from_csv;
};

/// Raised for invalid flag combinations; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses "re" or "re,im".
[[nodiscard]] Complex parse_complex(const std::string& text);

/// Parses argv (argv[0] is the program name). Throws ConfigError.
/// Returns nullopt when help was printed.
[[nodiscard]] std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Problem selected by the config: a registry entry or one built from expressions.
[[nodiscard]] ProblemSpec build_problem(const RunConfig& cfg);

/// Runs one command and writes its artifact. Returns 0 on success or 1 when
/// validate-tableau finds violations. Solver failures propagate as exceptions.
int run(const RunConfig& cfg, std::ostream& out);

/// Full entry point: parsing, execution and the exit-status mapping
/// (0 ok, 1 violations, 2 config error, 3 solver domain error).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mulrk::cli
