#include "mulrk/solvers.hpp"

#include "mulrk/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mulrk {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string at(double x) { return " at x=" + std::to_string(x); }

std::vector<Complex> eval_logs(const MIvp& p, double x, std::span<const LogValue> y) {
    const LogState f = p.f_mult(x, y);
    if (f.size() != p.dim) {
        throw ShapeError("right-hand side of '" + p.name + "' returned the wrong dimension");
    }
    std::vector<Complex> out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (!f[k].is_finite()) {
            throw DomainError("multiplicative derivative is undefined" + at(x), x);
        }
        out[k] = f[k].log();
    }
    return out;
}

std::vector<Complex> eval_ordinary(const OrdinaryIvp& p, double x, std::span<const Complex> y) {
    ComplexState g = p.g(x, y);
    if (g.size() != p.dim) {
        throw ShapeError("ordinary right-hand side of '" + p.name + "' returned the wrong dimension");
    }
    for (const Complex& v : g) {
        if (!finite(v)) {
            throw DomainError("ordinary right-hand side is not finite" + at(x), x);
        }
    }
    return g;
}

void check_method_tableau(const MButcherTableau& t, std::size_t stages, const char* who) {
    t.check_shape();
    if (t.stages() != stages) {
        throw ShapeError(std::string(who) + ": tableau has " + std::to_string(t.stages()) + " stages, expected " +
                         std::to_string(stages));
    }
}

} // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::mrk2: return "mrk2";
        case Method::mrk4: return "mrk4";
        case Method::rk4: return "rk4";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    if (name == "mrk2") return Method::mrk2;
    if (name == "mrk4") return Method::mrk4;
    if (name == "rk4") return Method::rk4;
    throw std::invalid_argument("unknown method '" + name + "' (expected mrk2, mrk4 or rk4)");
}

ComplexState Trajectory::values(std::size_t i) const {
    ComplexState out;
    out.reserve(y[i].size());
    for (const LogValue& v : y[i]) out.push_back(v.value());
    return out;
}

OrdinaryIvp ordinary_form(const MIvp& p) {
    OrdinaryIvp o;
    o.name = p.name;
    o.dim = p.dim;
    o.x0 = p.x0;
    o.exact = p.exact;
    for (const LogValue& v : p.y0) o.y0.push_back(v.value());
    if (p.g_ord) {
        o.g = *p.g_ord;
    } else {
        MultRhs f = p.f_mult;
        o.g = [f](double x, std::span<const Complex> y) {
            LogState ly;
            ly.reserve(y.size());
            for (const Complex& v : y) ly.push_back(from_complex(v));
            const LogState lf = f(x, ly);
            ComplexState g(y.size());
            for (std::size_t k = 0; k < y.size(); ++k) g[k] = y[k] * lf[k].log();
            return g;
        };
    }
    return o;
}

LogState mrk_step(const MIvp& p, double x, std::span<const LogValue> y, double h, const MButcherTableau& t) {
    const std::size_t s = t.stages();
    const std::size_t dim = y.size();
    std::vector<std::vector<Complex>> k(s);
    LogState stage(dim);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t c = 0; c < dim; ++c) {
            Complex z = y[c].log();
            for (std::size_t j = 0; j < i; ++j) {
                z += h * t.exponents[i][j] * k[j][c];
            }
            stage[c] = LogValue::from_log(z);
        }
        k[i] = eval_logs(p, x + t.nodes[i] * h, stage);
    }
    LogState out(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        Complex incr{0.0, 0.0};
        for (std::size_t i = 0; i < s; ++i) incr += t.weights[i] * k[i][c];
        const Complex z = y[c].log() + h * incr;
        if (!finite(z)) {
            throw DomainError("step produced a non-finite state" + at(x), x);
        }
        out[c] = LogValue::from_log(z);
    }
    return out;
}

LogState mrk2_step(const MIvp& p, double x, std::span<const LogValue> y, double h, const MButcherTableau& t) {
    check_method_tableau(t, 2, "mrk2_step");
    return mrk_step(p, x, y, h, t);
}

LogState mrk4_step(const MIvp& p, double x, std::span<const LogValue> y, double h, const MButcherTableau& t) {
    check_method_tableau(t, 4, "mrk4_step");
    return mrk_step(p, x, y, h, t);
}

ComplexState rk4_step(const OrdinaryIvp& p, double x, std::span<const Complex> y, double h) {
    const std::size_t dim = y.size();
    ComplexState tmp(dim);
    const auto k1 = eval_ordinary(p, x, y);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + (h / 2) * k1[i];
    const auto k2 = eval_ordinary(p, x + h / 2, tmp);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + (h / 2) * k2[i];
    const auto k3 = eval_ordinary(p, x + h / 2, tmp);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
    const auto k4 = eval_ordinary(p, x + h, tmp);

    ComplexState out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        out[i] = y[i] + (h / 6) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!finite(out[i])) {
            throw DomainError("RK4 step produced a non-finite state" + at(x), x);
        }
    }
    return out;
}

ComplexState rk4_step(const MIvp& p, double x, std::span<const Complex> y, double h) {
    if (!p.g_ord) {
        throw std::invalid_argument("rk4_step: problem '" + p.name + "' has no ordinary right-hand side");
    }
    return rk4_step(ordinary_form(p), x, y, h);
}

std::size_t step_count(double x0, double x_end, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw StepCountError("step size must be positive and finite");
    }
    const double ratio = (x_end - x0) / h;
    const double n = std::round(ratio);
    if (!(n >= 1.0) || std::abs(ratio - n) > 1e-9 * std::max(1.0, n)) {
        throw StepCountError("(x_end - x0)/h = " + std::to_string(ratio) + " is not a positive integer");
    }
    return static_cast<std::size_t>(n);
}

double grid_point(double x0, double x_end, double h, std::size_t i, std::size_t n) {
    return i == n ? x_end : x0 + static_cast<double>(i) * h;
}

Trajectory solve(const MIvp& p, Method method, double h, double x_end, const std::optional<MButcherTableau>& t) {
    if (method == Method::rk4) {
        return solve_ordinary(ordinary_form(p), h, x_end);
    }
    const MButcherTableau tab = t ? *t : (method == Method::mrk2 ? make_order2(0.5) : classical_mrk4());
    check_method_tableau(tab, method == Method::mrk2 ? 2 : 4, "solve");
    if (p.y0.size() != p.dim) {
        throw ShapeError("initial state of '" + p.name + "' has the wrong dimension");
    }
    for (const LogValue& v : p.y0) {
        if (!v.is_finite()) throw DomainError("initial value is not a valid nonzero number");
    }

    const std::size_t n = step_count(p.x0, x_end, h);
    Trajectory tr;
    tr.problem = p.name;
    tr.h = h;
    tr.x.reserve(n + 1);
    tr.y.reserve(n + 1);
    tr.x.push_back(p.x0);
    tr.y.push_back(p.y0);
    tr.meta.push_back({method, false});
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid_point(p.x0, x_end, h, i, n);
        try {
            tr.y.push_back(mrk_step(p, x, tr.y.back(), h, tab));
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + "; " + to_string(method) + " step from x=" +
                                  std::to_string(x) + " failed",
                              x);
        }
        tr.x.push_back(grid_point(p.x0, x_end, h, i + 1, n));
        tr.meta.push_back({method, false});
    }
    return tr;
}

Trajectory solve_ordinary(const OrdinaryIvp& p, double h, double x_end) {
    if (p.y0.size() != p.dim) {
        throw ShapeError("initial state of '" + p.name + "' has the wrong dimension");
    }
    const std::size_t n = step_count(p.x0, x_end, h);
    Trajectory tr;
    tr.problem = p.name;
    tr.h = h;
    ComplexState y = p.y0;
    LogState prev;
    for (const Complex& v : y) prev.push_back(from_complex(v));
    tr.x.push_back(p.x0);
    tr.y.push_back(prev);
    tr.meta.push_back({Method::rk4, false});
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid_point(p.x0, x_end, h, i, n);
        y = rk4_step(p, x, y, h);
        const double xn = grid_point(p.x0, x_end, h, i + 1, n);
        LogState lifted(y.size());
        for (std::size_t c = 0; c < y.size(); ++c) {
            try {
                lifted[c] = from_complex(y[c], prev[c]);
            } catch (const DomainError&) {
                throw DomainError("RK4 state is exactly zero" + at(xn), xn);
            }
        }
        prev = lifted;
        tr.x.push_back(xn);
        tr.y.push_back(std::move(lifted));
        tr.meta.push_back({Method::rk4, false});
    }
    return tr;
}

MIvp reduce_higher_order(const SecondOrderRhs& f, double x0, Complex y0, Complex y1, std::string name) {
    MIvp p;
    p.name = std::move(name);
    p.dim = 2;
    p.x0 = x0;
    p.y0 = {from_complex(y0), from_complex(y1)};
    p.f_mult = [f](double x, std::span<const LogValue> y) {
        return LogState{y[1], f(x, y[0], y[1])};
    };
    return p;
}

} // namespace mulrk
