#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace mulrk {

/// Explicit multiplicative Runge-Kutta scheme.
///
/// Stage i is evaluated at x + nodes[i]*h on the state
/// y * prod_j f_j^(exponents[i][j]*h), j < i, and the step is
/// y * prod_i f_i^(weights[i]*h). Row i of `exponents` holds exactly i entries.
struct MButcherTableau {
    std::vector<double> nodes;
    std::vector<std::vector<double>> exponents;
    std::vector<double> weights;

    [[nodiscard]] std::size_t stages() const noexcept { return weights.size(); }

    /// Throws ShapeError unless nodes/exponents/weights describe a lower-triangular scheme.
    void check_shape() const;

    friend bool operator==(const MButcherTableau&, const MButcherTableau&) = default;
};

struct Violation {
    std::string condition;
    double residual = 0.0;
    /// True for classical order-4 conditions beyond the weight/row-sum set.
    bool inherited = false;
};

inline constexpr double order_condition_tolerance = 1e-12;

[[nodiscard]] std::vector<Violation> validate_order2(const MButcherTableau& t);
[[nodiscard]] std::vector<Violation> validate_order4(const MButcherTableau& t);

[[nodiscard]] MButcherTableau classical_mrk4();

/// One-parameter family a = 1-b, p = q = 1/(2b). b = 1/2 is the trapezoidal choice.
[[nodiscard]] MButcherTableau make_order2(double b);

[[nodiscard]] nlohmann::json to_json(const MButcherTableau& t);
[[nodiscard]] MButcherTableau tableau_from_json(const nlohmann::json& j);

} // namespace mulrk
