#pragma once

#include "mulrk/ivp.hpp"
#include "mulrk/tableau.hpp"

#include <optional>
#include <span>

namespace mulrk {

/// One explicit multiplicative RK step with an arbitrary lower-triangular
/// tableau, computed as a linear combination of stage logarithms.
/// Throws DomainError (carrying x) when a stage value is not finite.
[[nodiscard]] LogState mrk_step(const MIvp& p, double x, std::span<const LogValue> y, double h,
                                const MButcherTableau& t);

/// Two-stage step; t must have two stages.
[[nodiscard]] LogState mrk2_step(const MIvp& p, double x, std::span<const LogValue> y, double h,
                                 const MButcherTableau& t = make_order2(0.5));

/// Four-stage step; t must have four stages.
[[nodiscard]] LogState mrk4_step(const MIvp& p, double x, std::span<const LogValue> y, double h,
                                 const MButcherTableau& t = classical_mrk4());

/// Classical RK4 step on y' = g(x, y).
[[nodiscard]] ComplexState rk4_step(const OrdinaryIvp& p, double x, std::span<const Complex> y, double h);
[[nodiscard]] ComplexState rk4_step(const MIvp& p, double x, std::span<const Complex> y, double h);

/// Number of steps of size h from x0 to x_end. Throws StepCountError unless
/// the ratio is a positive integer within 1e-9.
[[nodiscard]] std::size_t step_count(double x0, double x_end, double h);

/// Abscissa of grid point i; the last point is pinned to x_end.
[[nodiscard]] double grid_point(double x0, double x_end, double h, std::size_t i, std::size_t n);

/// Fixed-step solve on [p.x0, x_end]. For Method::rk4 the ordinary form is
/// integrated and its states are lifted to log coordinates with a continuous phase.
[[nodiscard]] Trajectory solve(const MIvp& p, Method method, double h, double x_end,
                               const std::optional<MButcherTableau>& t = std::nullopt);

[[nodiscard]] Trajectory solve_ordinary(const OrdinaryIvp& p, double h, double x_end);

/// Scalar right-hand side of a second-order problem y** = f(x, y, y*), as ln f.
using SecondOrderRhs = std::function<LogValue(double x, LogValue y, LogValue ystar)>;

/// Coupled first-order system (y0* = y1, y1* = f(x, y0, y1)).
/// Throws DomainError for zero initial data.
[[nodiscard]] MIvp reduce_higher_order(const SecondOrderRhs& f, double x0, Complex y0, Complex y1,
                                       std::string name = "second_order");

} // namespace mulrk
