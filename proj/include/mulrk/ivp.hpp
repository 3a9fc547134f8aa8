#pragma once

#include "mulrk/geomcalc.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mulrk {

using LogState = std::vector<LogValue>;
using ComplexState = std::vector<Complex>;

/// ln f(x, y) for each component, returned in log coordinates.
using MultRhs = std::function<LogState(double x, std::span<const LogValue> y)>;
using OrdinaryRhs = std::function<ComplexState(double x, std::span<const Complex> y)>;
using ExactSolution = std::function<ComplexState(double x)>;

/// Multiplicative initial value problem y* = f(x, y), y(x0) = y0.
struct MIvp {
    std::string name;
    std::size_t dim = 1;
    MultRhs f_mult;
    /// Ordinary form y' = g(x, y) on the same state, when known in closed form.
    std::optional<OrdinaryRhs> g_ord;
    double x0 = 0.0;
    LogState y0;
    std::optional<ExactSolution> exact;
};

/// Ordinary initial value problem y' = g(x, y); the baseline solved by RK4.
struct OrdinaryIvp {
    std::string name;
    std::size_t dim = 1;
    OrdinaryRhs g;
    double x0 = 0.0;
    ComplexState y0;
    std::optional<ExactSolution> exact;
};

/// Ordinary form of a multiplicative problem. Uses p.g_ord when present and
/// otherwise g(x, y) = y * ln f(x, y), which cannot be evaluated at y = 0.
[[nodiscard]] OrdinaryIvp ordinary_form(const MIvp& p);

enum class Method : std::uint8_t { mrk2, mrk4, rk4 };

[[nodiscard]] std::string to_string(Method m);
/// Throws std::invalid_argument for unknown names.
[[nodiscard]] Method parse_method(const std::string& name);

struct StepMeta {
    Method method = Method::mrk4;
    /// Set on the sample where the state was handed between representations.
    bool handover = false;
};

/// Solver output on the grid x0 + i*h. Samples produced by an ordinary step
/// may hold an exact root, stored with log_mag = -inf.
struct Trajectory {
    std::string problem;
    double h = 0.0;
    std::vector<double> x;
    std::vector<LogState> y;
    std::vector<StepMeta> meta;

    [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
    [[nodiscard]] ComplexState values(std::size_t i) const;
};

} // namespace mulrk
