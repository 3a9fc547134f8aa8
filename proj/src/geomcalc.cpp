#include "mulrk/geomcalc.hpp"

#include "mulrk/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mulrk {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

bool LogValue::is_finite() const noexcept { return std::isfinite(log_mag) && std::isfinite(arg); }

LogValue from_complex(Complex z, std::optional<LogValue> hint) {
    if (!finite(z)) {
        throw DomainError("from_complex: non-finite value");
    }
    if (z == Complex{0.0, 0.0}) {
        throw DomainError("from_complex: 0+0i has no multiplicative representation");
    }
    double arg = std::arg(z);
    if (hint) {
        arg += two_pi * std::round((hint->arg - arg) / two_pi);
    }
    return {std::log(std::abs(z)), arg};
}

LogValue mpow(LogValue y, double h) noexcept { return {h * y.log_mag, h * y.arg}; }

LogValue mmul(LogValue a, LogValue b) noexcept { return {a.log_mag + b.log_mag, a.arg + b.arg}; }

LogValue mdiv(LogValue a, LogValue b) noexcept { return {a.log_mag - b.log_mag, a.arg - b.arg}; }

LogValue ordinary_to_mult_rhs(const ScalarOrdinaryRhs& g, double x, LogValue y) {
    const Complex yv = y.value();
    const Complex gv = g(x, yv);
    if (!finite(gv)) {
        throw DomainError("ordinary right-hand side is not finite at x=" + std::to_string(x), x);
    }
    // ln(exp(g/y)) = g/y; no branch to resolve.
    const Complex lf = gv / yv;
    if (!finite(lf)) {
        throw DomainError("g/y is not finite at x=" + std::to_string(x), x);
    }
    return LogValue::from_log(lf);
}

std::pair<Complex, Complex> mult_to_ordinary_state(LogValue y, LogValue ystar) {
    const Complex yv = y.value();
    return {yv, yv * ystar.log()};
}

LogValue numeric_star_derivative(const std::function<Complex(double)>& fn, double x, double h) {
    if (h == 0.0) {
        throw DomainError("numeric_star_derivative: h must be nonzero");
    }
    const LogValue base = from_complex(fn(x));
    const LogValue ahead = from_complex(fn(x + h), base);
    return mpow(mdiv(ahead, base), 1.0 / h);
}

double phase_distance(double a, double b) noexcept {
    const double d = std::fmod(std::abs(a - b), two_pi);
    return d > std::numbers::pi ? two_pi - d : d;
}

} // namespace mulrk
