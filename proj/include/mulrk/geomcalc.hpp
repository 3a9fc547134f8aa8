#pragma once

// Complex multiplicative arithmetic in (log-magnitude, unwrapped phase)
// coordinates.

#include <complex>
#include <functional>
#include <optional>
#include <utility>

namespace mulrk {

using Complex = std::complex<double>;

/// A nonzero complex number exp(log_mag + i*arg). The phase is not reduced
/// mod 2*pi, so a sequence of values can wind around the origin continuously.
struct LogValue {
    double log_mag = 0.0;
    double arg = 0.0;

    [[nodiscard]] static LogValue from_log(Complex log) noexcept { return {log.real(), log.imag()}; }

    [[nodiscard]] Complex log() const noexcept { return {log_mag, arg}; }
    [[nodiscard]] Complex value() const { return std::polar(std::exp(log_mag), arg); }
    [[nodiscard]] double magnitude() const { return std::exp(log_mag); }
    [[nodiscard]] bool is_finite() const noexcept;

    friend bool operator==(const LogValue&, const LogValue&) = default;
};

/// Lifts z into log coordinates. With a hint the phase is taken on the branch
/// nearest to hint->arg, otherwise the principal branch (-pi, pi].
/// Throws DomainError for z == 0 or non-finite z.
[[nodiscard]] LogValue from_complex(Complex z, std::optional<LogValue> hint = std::nullopt);

/// y^h under the tracked branch.
[[nodiscard]] LogValue mpow(LogValue y, double h) noexcept;

[[nodiscard]] LogValue mmul(LogValue a, LogValue b) noexcept;
[[nodiscard]] LogValue mdiv(LogValue a, LogValue b) noexcept;

using ScalarOrdinaryRhs = std::function<Complex(double x, Complex y)>;

/// Multiplicative right-hand side exp(g(x,y)/y) that corresponds to y' = g(x,y).
[[nodiscard]] LogValue ordinary_to_mult_rhs(const ScalarOrdinaryRhs& g, double x, LogValue y);

/// Converts (y, y*) to ordinary data (y, y') with y' = y * ln(y*).
[[nodiscard]] std::pair<Complex, Complex> mult_to_ordinary_state(LogValue y, LogValue ystar);

/// Multiplicative difference quotient (fn(x+h)/fn(x))^(1/h).
[[nodiscard]] LogValue numeric_star_derivative(const std::function<Complex(double)>& fn, double x, double h);

/// Shortest distance between two phases taken modulo 2*pi, in [0, pi].
[[nodiscard]] double phase_distance(double a, double b) noexcept;

} // namespace mulrk
