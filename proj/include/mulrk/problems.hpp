#pragma once

#include "mulrk/ivp.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mulrk {

using ParamMap = std::map<std::string, double>;

struct ProblemSpec {
    std::string name;
    MIvp mivp;
    /// Newtonian counterpart solved by RK4 when it lives on a different state
    /// than the multiplicative problem (second-order problems).
    std::optional<OrdinaryIvp> baseline;
    double default_h = 0.0;
    double default_x_end = 0.0;
    ParamMap params;
    std::string provenance;
    /// Expression forms for the scalar problems, in the exprparse grammar.
    std::optional<std::string> mrhs_expr;
    std::optional<std::string> orhs_expr;
};

/// Builds a named problem with `overrides` applied to its named constants.
/// Throws std::invalid_argument for unknown names or parameters.
[[nodiscard]] ProblemSpec make_problem(const std::string& name, const ParamMap& overrides = {});

[[nodiscard]] std::vector<std::string> problem_names();

/// All problems with default parameters.
[[nodiscard]] std::vector<ProblemSpec> registry();

[[nodiscard]] ProblemSpec lookup(const std::string& name);

/// Pinned reference for problems without a closed form: MRK4 at h = 0.01 on
/// [x0, default_x_end].
[[nodiscard]] Trajectory reference_trajectory(const ProblemSpec& spec);

/// Checks exp(g/y) == f within 1e-10 at `sample_count` points along an exact
/// (or MRK4) trajectory. Returns one message per mismatching point.
[[nodiscard]] std::vector<std::string> consistency_check(const ProblemSpec& spec, int sample_count);

} // namespace mulrk
