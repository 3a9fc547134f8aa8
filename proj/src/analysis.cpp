#include "mulrk/analysis.hpp"

#include "mulrk/errors.hpp"
#include "mulrk/format.hpp"
#include "mulrk/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace mulrk {

double rel_error_from_log(Complex d) {
    const double a = d.real();
    const double b = d.imag();
    if (a == -std::numeric_limits<double>::infinity()) return 1.0;
    const double s = std::sin(b / 2);
    const double re = std::expm1(a) * std::cos(b) - 2.0 * s * s;
    const double im = std::exp(a) * std::sin(b);
    return std::hypot(re, im);
}

std::vector<ErrorRecord> global_error(const Trajectory& traj, const ExactSolution& exact, std::size_t component) {
    std::vector<ErrorRecord> out;
    out.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        ErrorRecord r;
        r.x = traj.x[i];
        r.h = traj.h;
        r.eta = traj.y[i].at(component);
        r.y_exact = exact(r.x).at(component);
        if (r.y_exact == Complex{0.0, 0.0}) {
            throw DomainError("exact solution vanishes at x=" + std::to_string(r.x), r.x);
        }
        const LogValue ly = from_complex(r.y_exact, r.eta.is_finite() ? std::optional{r.eta} : std::nullopt);
        r.mult_error = mdiv(r.eta, ly);
        r.log_error = std::abs(r.mult_error.log());
        r.rel_error = rel_error_from_log(r.mult_error.log());
        out.push_back(r);
    }
    return out;
}

LogValue local_error(const MIvp& p, double x, const LogState& y, double h, const MButcherTableau& t,
                     int ref_substeps) {
    if (ref_substeps < 64) {
        throw std::invalid_argument("local_error: ref_substeps must be at least 64");
    }
    if (h == 0.0) {
        return {};
    }
    t.check_shape();
    const LogState method = mrk_step(p, x, y, h, t);

    const MButcherTableau ref_tab = classical_mrk4();
    const double hr = h / ref_substeps;
    LogState z = y;
    for (int k = 0; k < ref_substeps; ++k) {
        z = mrk_step(p, x + k * hr, z, hr, ref_tab);
    }
    // ln tau = ln Delta - ln Phi = (ln z(x+h) - ln eta_1)/h; take the worst component.
    LogValue worst{};
    for (std::size_t c = 0; c < y.size(); ++c) {
        const LogValue tau = mpow(mdiv(z[c], method[c]), 1.0 / h);
        if (std::abs(tau.log()) >= std::abs(worst.log())) worst = tau;
    }
    return worst;
}

double estimate_order(const MIvp& p, Method method, double h0, int levels, double x_end) {
    if (!p.exact) {
        throw std::invalid_argument("estimate_order: problem '" + p.name + "' has no exact solution");
    }
    if (levels < 2) {
        throw std::invalid_argument("estimate_order: need at least two levels");
    }
    std::vector<double> lx, ly;
    double h = h0;
    for (int l = 0; l < levels; ++l, h /= 2) {
        const Trajectory tr = solve(p, method, h, x_end);
        const double err = global_error(tr, *p.exact).back().log_error;
        if (!(err >= 1e-14)) {
            throw DegenerateError("log error " + format_g17(err) + " at h=" + format_g17(h) +
                                  " is at the rounding floor; order is undefined");
        }
        lx.push_back(std::log(h));
        ly.push_back(std::log(err));
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

double lemma1_log_bound(double xi0, double delta, double B, int n) {
    const double growth = std::exp(n * delta);
    // (e^(n delta) - 1)/delta, exact at n = 0.
    const double b_exp = std::expm1(n * delta) / delta;
    const double log_xi = std::log(std::abs(xi0));
    const double log_b = b_exp == 0.0 ? 0.0 : b_exp * std::log(B);
    return growth * log_xi + log_b;
}

double lemma1_bound(double xi0, double delta, double B, int n) {
    const double growth = std::exp(n * delta);
    const double b_exp = std::expm1(n * delta) / delta;
    return std::pow(std::abs(xi0), growth) * std::pow(B, b_exp);
}

double theorem_bound_exponent(double x, double h, double M, double N, double p, double x0) {
    return std::pow(std::abs(h), p) * N * std::expm1(M * std::abs(x - x0)) / M;
}

bool check_theorem_bound(const std::vector<ErrorRecord>& records, double M, double N, double p, double x0) {
    return std::all_of(records.begin(), records.end(), [&](const ErrorRecord& r) {
        return r.log_error <= theorem_bound_exponent(r.x, r.h, M, N, p, x0);
    });
}

double fit_theorem_n(const std::vector<ErrorRecord>& records, double M, double p, double x0) {
    double n = 0.0;
    for (const ErrorRecord& r : records) {
        const double unit = theorem_bound_exponent(r.x, r.h, M, 1.0, p, x0);
        if (unit > 0.0) n = std::max(n, r.log_error / unit);
    }
    return n;
}

namespace {

BenchSample run_cell(const MIvp& p, Method method, double h, double x_end, const SweepOptions& opts) {
    BenchSample s;
    s.problem = p.name;
    s.method = method;
    s.h = h;
    try {
        s.steps = step_count(p.x0, x_end, h);
        const OrdinaryIvp baseline = opts.baseline ? *opts.baseline : ordinary_form(p);
        auto run = [&] {
            return method == Method::rk4 ? solve_ordinary(baseline, h, x_end) : solve(p, method, h, x_end);
        };
        const Trajectory warm = run();
        const ExactSolution& exact = (method == Method::rk4 && opts.baseline) ? *baseline.exact : *p.exact;
        s.final_rel_error = global_error(warm, exact).back().rel_error;

        std::vector<double> times;
        for (int r = 0; r < opts.repeats; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            const Trajectory tr = run();
            const auto t1 = std::chrono::steady_clock::now();
            if (tr.size() != warm.size()) throw Error("non-deterministic trajectory length");
            times.push_back(std::max(std::chrono::duration<double>(t1 - t0).count(), 1e-9));
        }
        auto mid = times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2);
        std::nth_element(times.begin(), mid, times.end());
        s.wall_time = *mid;
    } catch (const std::exception& e) {
        s.failure = e.what();
    }
    return s;
}

} // namespace

std::vector<BenchSample> time_error_sweep(const MIvp& p, const std::vector<Method>& methods,
                                          const std::vector<double>& h_list, double x_end,
                                          const SweepOptions& opts) {
    if (opts.repeats < 3) {
        throw std::invalid_argument("time_error_sweep: repeats must be at least 3");
    }
    if (!p.exact) {
        throw std::invalid_argument("time_error_sweep: problem '" + p.name + "' has no exact solution");
    }
    if (opts.baseline && !opts.baseline->exact) {
        throw std::invalid_argument("time_error_sweep: baseline problem has no exact solution");
    }
    struct Cell {
        Method method;
        double h;
    };
    std::vector<Cell> cells;
    for (Method m : methods) {
        for (double h : h_list) cells.push_back({m, h});
    }
    std::vector<BenchSample> out(cells.size());

    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(opts.threads, 1)), 1,
                                                        std::max<std::size_t>(cells.size(), 1));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            out[i] = run_cell(p, cells[i].method, cells[i].h, x_end, opts);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    std::stable_sort(out.begin(), out.end(), [](const BenchSample& a, const BenchSample& b) {
        if (a.method != b.method) return a.method < b.method;
        return a.h > b.h;
    });
    return out;
}

std::string bench_csv(const std::vector<BenchSample>& samples) {
    std::string out = "problem,method,h,steps,wall_time_s,final_rel_error\n";
    for (const BenchSample& s : samples) {
        out += s.problem + ',' + to_string(s.method) + ',' + format_g17(s.h) + ',' + std::to_string(s.steps) + ',';
        if (!s.failure) {
            out += format_g17(s.wall_time) + ',' + format_g17(s.final_rel_error);
        } else {
            out += ',';
        }
        out += '\n';
    }
    return out;
}

} // namespace mulrk
