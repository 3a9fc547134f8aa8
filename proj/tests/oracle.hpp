#pragma once

// Test-only reference integrators. They share nothing with the solver code
// path except the problem's right-hand side.

#include "mulrk/ivp.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Vec = std::vector<C>;
using Field = std::function<Vec(double, const Vec&)>;

inline Vec axpy(const Vec& y, double a, const Vec& k) {
    Vec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * k[i];
    return out;
}

/// Textbook RK4 step on z' = F(x, z).
inline Vec rk4(const Field& F, double x, const Vec& z, double h) {
    const Vec k1 = F(x, z);
    const Vec k2 = F(x + 0.5 * h, axpy(z, 0.5 * h, k1));
    const Vec k3 = F(x + 0.5 * h, axpy(z, 0.5 * h, k2));
    const Vec k4 = F(x + h, axpy(z, h, k3));
    Vec out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

/// z' = ln f(x, e^z) for a multiplicative problem.
inline Field log_field(const mulrk::MIvp& p) {
    return [p](double x, const Vec& z) {
        mulrk::LogState y;
        for (const C& v : z) y.push_back(mulrk::LogValue::from_log(v));
        const mulrk::LogState f = p.f_mult(x, y);
        Vec out;
        for (const auto& v : f) out.push_back(v.log());
        return out;
    };
}

/// Log-coordinate trajectory of classical RK4 on z' = ln f(x, e^z).
inline std::vector<Vec> log_space_rk4(const mulrk::MIvp& p, double h, int steps) {
    const Field F = log_field(p);
    Vec z;
    for (const auto& v : p.y0) z.push_back(v.log());
    std::vector<Vec> out{z};
    for (int i = 0; i < steps; ++i) {
        z = rk4(F, p.x0 + i * h, z, h);
        out.push_back(z);
    }
    return out;
}

} // namespace oracle
