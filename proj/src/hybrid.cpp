#include "mulrk/hybrid.hpp"

#include "mulrk/errors.hpp"
#include "mulrk/solvers.hpp"
#include "mulrk/tableau.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mulrk {

void HybridConfig::validate() const {
    if (zero_threshold && !(*zero_threshold > 0.0)) {
        throw std::invalid_argument("hybrid: zero threshold must be positive");
    }
    if (min_ordinary_steps < 1) {
        throw std::invalid_argument("hybrid: min ordinary steps must be at least 1");
    }
    if (!(rearm_factor > 1.0)) {
        throw std::invalid_argument("hybrid: rearm factor must exceed 1");
    }
}

std::vector<double> HybridConfig::thresholds(std::span<const LogValue> y0) const {
    std::vector<double> eps;
    eps.reserve(y0.size());
    for (const LogValue& v : y0) eps.push_back(zero_threshold ? *zero_threshold : 0.1 * v.magnitude());
    return eps;
}

bool detect_handover(std::span<const LogValue> y, std::optional<std::span<const LogValue>> stage_logs,
                     std::span<const double> eps) {
    for (std::size_t c = 0; c < y.size(); ++c) {
        if (!(y[c].magnitude() >= eps[c])) return true;
    }
    if (!stage_logs) return true;
    for (std::size_t c = 0; c < stage_logs->size(); ++c) {
        const LogValue& lf = (*stage_logs)[c];
        if (!lf.is_finite()) return true;
        const double e = eps[c % eps.size()];
        if (std::abs(lf.log()) > 1.0 / (e * e)) return true;
    }
    return false;
}

namespace {

bool outside_rearm_band(std::span<const Complex> y, std::span<const double> eps, double rearm) {
    for (std::size_t c = 0; c < y.size(); ++c) {
        if (!(std::abs(y[c]) > rearm * eps[c])) return false;
    }
    return true;
}

/// Copies the right-hand side so every stage evaluation of a step can be
/// checked against the blow-up guard before the step is committed.
struct GuardedRhs {
    const MIvp& problem;
    std::span<const double> eps;
    bool tripped = false;

    MIvp wrap() {
        MIvp q = problem;
        q.f_mult = [this](double x, std::span<const LogValue> y) {
            LogState f = problem.f_mult(x, y);
            if (!tripped && detect_handover(std::span<const LogValue>{}, std::span<const LogValue>(f), eps)) {
                tripped = true;
            }
            return f;
        };
        return q;
    }
};

void throw_if_unrecoverable(std::span<const Complex> y, bool derived_g, double x) {
    if (!derived_g) return;
    for (const Complex& v : y) {
        if (v == Complex{0.0, 0.0}) {
            throw UnrecoverableZero(
                "state is exactly 0+0i at x=" + std::to_string(x) + " and no ordinary right-hand side is available", x);
        }
    }
}

} // namespace

Trajectory solve_hybrid(const MIvp& p, double h, double x_end, const HybridConfig& cfg) {
    cfg.validate();
    const std::size_t n = step_count(p.x0, x_end, h);
    const std::vector<double> eps = cfg.thresholds(p.y0);
    const MButcherTableau tab = classical_mrk4();
    const OrdinaryIvp ordinary = ordinary_form(p);
    const bool derived_g = !p.g_ord.has_value();

    GuardedRhs guard{p, eps};
    const MIvp guarded = guard.wrap();

    Trajectory tr;
    tr.problem = p.name;
    tr.h = h;
    tr.x.push_back(p.x0);
    tr.y.push_back(p.y0);
    tr.meta.push_back({Method::mrk4, false});

    bool ordinary_mode = false;
    int ordinary_steps = 0;
    ComplexState yc;

    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid_point(p.x0, x_end, h, i, n);
        const double xn = grid_point(p.x0, x_end, h, i + 1, n);

        if (!ordinary_mode) {
            const LogState& y = tr.y.back();
            bool handover = detect_handover(y, std::span<const LogValue>{}, eps);
            LogState next;
            if (!handover) {
                guard.tripped = false;
                try {
                    next = mrk_step(guarded, x, y, h, tab);
                } catch (const DomainError&) {
                    handover = true;
                }
                handover = handover || guard.tripped;
            }
            if (!handover) {
                tr.y.push_back(std::move(next));
                tr.x.push_back(xn);
                tr.meta.push_back({Method::mrk4, false});
                continue;
            }
            // Switch at x_i: hand (y, y') to the ordinary integrator.
            yc.clear();
            for (const LogValue& c : y) yc.push_back(c.value());
            throw_if_unrecoverable(yc, derived_g, x);
            const ComplexState g = ordinary.g(x, yc);
            for (std::size_t c = 0; c < y.size(); ++c) {
                const Complex yv = y[c].value();
                const LogValue ystar = LogValue::from_log(g[c] / yv);
                yc[c] = mult_to_ordinary_state(y[c], ystar).first;
            }
            tr.meta.back().handover = true;
            ordinary_mode = true;
            ordinary_steps = 0;
        }

        throw_if_unrecoverable(yc, derived_g, x);
        yc = rk4_step(ordinary, x, yc, h);
        ++ordinary_steps;

        LogState lifted(yc.size());
        for (std::size_t c = 0; c < yc.size(); ++c) {
            if (yc[c] == Complex{0.0, 0.0}) {
                lifted[c] = {-std::numeric_limits<double>::infinity(), tr.y.back()[c].arg};
            } else {
                lifted[c] = from_complex(yc[c], tr.y.back()[c]);
            }
        }
        bool hand_back = ordinary_steps >= cfg.min_ordinary_steps && outside_rearm_band(yc, eps, cfg.rearm_factor);
        tr.y.push_back(std::move(lifted));
        tr.x.push_back(xn);
        tr.meta.push_back({Method::rk4, hand_back});
        if (hand_back) {
            ordinary_mode = false;
        }
    }
    return tr;
}

} // namespace mulrk
