#include "mulrk/problems.hpp"

#include "mulrk/format.hpp"
#include "mulrk/geomcalc.hpp"
#include "mulrk/solvers.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mulrk {

namespace {

ParamMap merge(ParamMap defaults, const ParamMap& overrides, const std::string& name) {
    for (const auto& [key, value] : overrides) {
        auto it = defaults.find(key);
        if (it == defaults.end()) {
            throw std::invalid_argument("problem '" + name + "' has no parameter '" + key + "'");
        }
        it->second = value;
    }
    return defaults;
}

std::string num(double v) { return format_g17(v); }

// y* = exp(1/(2 y^2)), y(0) = 1; y' = 1/(2y); y = sqrt(x + 1).
ProblemSpec make_sqrt(const ParamMap& overrides) {
    ProblemSpec s;
    s.name = "sqrt";
    s.params = merge({{"x0", 0.0}, {"y0", 1.0}}, overrides, s.name);
    const double x0 = s.params.at("x0");
    const double y0 = s.params.at("y0");
    // (y^2)' = 2 y y' = 1, so y^2 = x + C.
    const double c = y0 * y0 - x0;

    s.mivp.name = s.name;
    s.mivp.dim = 1;
    s.mivp.x0 = x0;
    s.mivp.y0 = {from_complex(y0)};
    s.mivp.f_mult = [](double, std::span<const LogValue> y) {
        // ln f = 1/(2 y^2) = exp(-2 ln y)/2
        return LogState{LogValue::from_log(0.5 * std::exp(-2.0 * y[0].log()))};
    };
    s.mivp.g_ord = [](double, std::span<const Complex> y) { return ComplexState{1.0 / (2.0 * y[0])}; };
    s.mivp.exact = [c](double x) { return ComplexState{std::sqrt(Complex{x + c, 0.0})}; };
    s.default_h = 0.3;
    s.default_x_end = 3.0;
    s.provenance = "square-root problem y* = exp(1/(2y^2)), Newtonian form y' = 1/(2y), solution sqrt(x+1)";
    s.mrhs_expr = "exp(1/(2*y^2))";
    s.orhs_expr = "1/(2*y)";
    return s;
}

// Baranyi bacterial growth, y' = mu (1 - e^(y - ymax)) / (1 + e^(-alpha (t - lambda))).
ProblemSpec make_baranyi(const ParamMap& overrides) {
    ProblemSpec s;
    s.name = "baranyi";
    s.params = merge({{"lambda", 3.21}, {"mu_max", 0.644}, {"alpha", 4.0}, {"y_max", 18.0}, {"y0", 7.0},
                      {"t_end", 25.0}},
                     overrides, s.name);
    const double lambda = s.params.at("lambda");
    const double mu = s.params.at("mu_max");
    const double alpha = s.params.at("alpha");
    const double ymax = s.params.at("y_max");

    auto g = [=](double t, Complex y) {
        return mu * (1.0 - std::exp(y - ymax)) / (1.0 + std::exp(-alpha * (t - lambda)));
    };
    s.mivp.name = s.name;
    s.mivp.dim = 1;
    s.mivp.x0 = 0.0;
    s.mivp.y0 = {from_complex(s.params.at("y0"))};
    s.mivp.f_mult = [g](double t, std::span<const LogValue> y) {
        const Complex yv = y[0].value();
        return LogState{LogValue::from_log(g(t, yv) / yv)};
    };
    s.mivp.g_ord = [g](double t, std::span<const Complex> y) { return ComplexState{g(t, y[0])}; };
    s.default_h = 0.1;
    s.default_x_end = s.params.at("t_end");
    s.provenance = "Baranyi growth model (Huang form); no closed-form solution";
    const std::string gexpr = num(mu) + "*(1-exp(y-" + num(ymax) + "))/(1+exp(-" + num(alpha) + "*(x-" +
                              num(lambda) + ")))";
    s.orhs_expr = gexpr;
    s.mrhs_expr = "exp((" + gexpr + ")/y)";
    return s;
}

// y** = e, reduced to (y0* = y1, y1* = e); y = alpha exp(x^2/2 + beta x).
ProblemSpec make_second_order(const ParamMap& overrides) {
    ProblemSpec s;
    s.name = "second_order";
    s.params = merge({{"alpha", 1.0}, {"beta", 1.0}, {"x0", 1.0}}, overrides, s.name);
    const double alpha = s.params.at("alpha");
    const double beta = s.params.at("beta");
    const double x0 = s.params.at("x0");

    auto y_exact = [=](double x) { return alpha * std::exp(x * x / 2 + beta * x); };
    s.mivp = reduce_higher_order([](double, LogValue, LogValue) { return LogValue{1.0, 0.0}; }, x0,
                                 y_exact(x0), std::exp(x0 + beta), s.name);
    s.mivp.exact = [=](double x) { return ComplexState{y_exact(x), std::exp(x + beta)}; };
    // Same-state ordinary form: y0' = y0 ln y1, y1' = y1.
    s.mivp.g_ord = [](double, std::span<const Complex> y) { return ComplexState{y[0] * std::log(y[1]), y[1]}; };

    OrdinaryIvp b;
    b.name = s.name + "_newtonian";
    b.dim = 2;
    b.x0 = x0;
    b.y0 = {y_exact(x0), (x0 + beta) * y_exact(x0)};
    // y'' = y'^2/y + y on (y, y').
    b.g = [](double, std::span<const Complex> y) { return ComplexState{y[1], y[1] * y[1] / y[0] + y[0]}; };
    b.exact = [=](double x) { return ComplexState{y_exact(x), (x + beta) * y_exact(x)}; };
    s.baseline = std::move(b);

    s.default_h = 0.25;
    s.default_x_end = 1.75;
    s.provenance = "second-order problem y** = e with y(1) = e^(3/2), y*(1) = e^2; Newtonian form y'' = y'^2/y + y";
    return s;
}

// y' = -rate, y(0) = y0: a single root at x = y0/rate.
ProblemSpec make_root_cross(const ParamMap& overrides) {
    ProblemSpec s;
    s.name = "root_cross";
    s.params = merge({{"rate", 1.0}, {"y0", 1.0}}, overrides, s.name);
    const double rate = s.params.at("rate");
    const double y0 = s.params.at("y0");

    s.mivp.name = s.name;
    s.mivp.dim = 1;
    s.mivp.x0 = 0.0;
    s.mivp.y0 = {from_complex(y0)};
    s.mivp.f_mult = [rate](double, std::span<const LogValue> y) {
        return LogState{LogValue::from_log(-rate * std::exp(-y[0].log()))};
    };
    s.mivp.g_ord = [rate](double, std::span<const Complex>) { return ComplexState{Complex{-rate, 0.0}}; };
    s.mivp.exact = [=](double x) { return ComplexState{Complex{y0 - rate * x, 0.0}}; };
    s.default_h = 0.05;
    s.default_x_end = 2.0;
    s.provenance = "manufactured linear problem crossing zero at x = y0/rate";
    s.orhs_expr = "-" + num(rate);
    s.mrhs_expr = "exp(-" + num(rate) + "/y)";
    return s;
}

} // namespace

std::vector<std::string> problem_names() { return {"sqrt", "baranyi", "second_order", "root_cross"}; }

ProblemSpec make_problem(const std::string& name, const ParamMap& overrides) {
    if (name == "sqrt") return make_sqrt(overrides);
    if (name == "baranyi") return make_baranyi(overrides);
    if (name == "second_order") return make_second_order(overrides);
    if (name == "root_cross") return make_root_cross(overrides);
    throw std::invalid_argument("unknown problem '" + name + "'");
}

std::vector<ProblemSpec> registry() {
    std::vector<ProblemSpec> out;
    for (const std::string& n : problem_names()) out.push_back(make_problem(n));
    return out;
}

ProblemSpec lookup(const std::string& name) { return make_problem(name); }

Trajectory reference_trajectory(const ProblemSpec& spec) {
    return solve(spec.mivp, Method::mrk4, 0.01, spec.default_x_end);
}

std::vector<std::string> consistency_check(const ProblemSpec& spec, int sample_count) {
    std::vector<std::string> out;
    const MIvp& p = spec.mivp;
    if (!p.g_ord || sample_count <= 0) return out;

    // Sample points along the exact solution, or a coarse MRK4 run.
    std::vector<double> xs;
    std::vector<LogState> ys;
    const double span = spec.default_x_end - p.x0;
    if (p.exact) {
        for (int k = 0; k < sample_count; ++k) {
            const double x = p.x0 + span * (k + 0.5) / sample_count;
            LogState y;
            for (const Complex& v : (*p.exact)(x)) y.push_back(from_complex(v));
            xs.push_back(x);
            ys.push_back(std::move(y));
        }
    } else {
        const Trajectory tr = solve(p, Method::mrk4, spec.default_h, spec.default_x_end);
        for (int k = 0; k < sample_count; ++k) {
            const std::size_t i = (tr.size() - 1) * static_cast<std::size_t>(k) / static_cast<std::size_t>(sample_count);
            xs.push_back(tr.x[i]);
            ys.push_back(tr.y[i]);
        }
    }

    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double x = xs[k];
        const LogState f = p.f_mult(x, ys[k]);
        ComplexState yv;
        for (const LogValue& v : ys[k]) yv.push_back(v.value());
        const ComplexState g = (*p.g_ord)(x, yv);
        for (std::size_t c = 0; c < f.size(); ++c) {
            const Complex expected = g[c] / yv[c];
            const Complex d = f[c].log() - expected;
            const double dphase = std::remainder(d.imag(), 2.0 * std::numbers::pi);
            const double mismatch = std::hypot(d.real(), dphase);
            if (!(mismatch <= 1e-10)) {
                out.push_back("x=" + format_g17(x) + " component " + std::to_string(c) + ": |ln f - g/y| = " +
                              format_g17(mismatch));
            }
        }
    }
    return out;
}

} // namespace mulrk
