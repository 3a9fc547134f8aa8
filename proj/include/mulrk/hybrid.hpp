#pragma once

#include "mulrk/ivp.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mulrk {

/// Controls the handover between multiplicative and ordinary stepping near a
/// root of the solution.
struct HybridConfig {
    /// Handover threshold on |y|. Unset means 0.1*|y0| per component.
    std::optional<double> zero_threshold;
    /// Minimum number of ordinary steps before handing back.
    int min_ordinary_steps = 2;
    /// Hand back once every component satisfies |y| > rearm_factor * threshold.
    double rearm_factor = 1.5;

    /// Throws std::invalid_argument on an out-of-range field.
    void validate() const;
    /// Per-component thresholds for the given initial state.
    [[nodiscard]] std::vector<double> thresholds(std::span<const LogValue> y0) const;
};

/// True when a component is inside the band |y| < eps, or when the stage
/// evaluation failed (stage_logs == nullopt) or blew up: non-finite or
/// |ln f| > 1/eps^2.
[[nodiscard]] bool detect_handover(std::span<const LogValue> y,
                                   std::optional<std::span<const LogValue>> stage_logs,
                                   std::span<const double> eps);

/// MRK4 with an ordinary RK4 bypass across roots of the solution. Needs an
/// ordinary form; when g_ord is absent, y*ln f is used, and an exact zero at
/// a grid point then raises UnrecoverableZero.
[[nodiscard]] Trajectory solve_hybrid(const MIvp& p, double h, double x_end, const HybridConfig& cfg = {});

} // namespace mulrk
