#pragma once

#include "mulrk/ivp.hpp"
#include "mulrk/tableau.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mulrk {

/// Multiplicative global error e = eta/y at one grid point.
struct ErrorRecord {
    double x = 0.0;
    double h = 0.0;
    LogValue eta;
    Complex y_exact;
    LogValue mult_error;
    /// |ln(eta/y)|, complex modulus.
    double log_error = 0.0;
    /// |eta/y - 1| as a fraction.
    double rel_error = 0.0;
};

/// One record per sample of component `component`. Throws DomainError where the exact solution vanishes.
[[nodiscard]] std::vector<ErrorRecord> global_error(const Trajectory& traj, const ExactSolution& exact,
                                                    std::size_t component = 0);

/// |exp(d) - 1| without cancellation for small d.
[[nodiscard]] double rel_error_from_log(Complex d);

/// Multiplicative local error tau = Delta/Phi of a single step from (x, y).
/// Delta comes from a reference MRK4 solve with step h/ref_substeps.
[[nodiscard]] LogValue local_error(const MIvp& p, double x, const LogState& y, double h, const MButcherTableau& t,
                                   int ref_substeps = 256);

/// Least-squares slope of ln(log_error at x_end) against ln(h) over h0, h0/2, ...
/// Throws DegenerateError when an error is below 1e-14.
[[nodiscard]] double estimate_order(const MIvp& p, Method method, double h0, int levels, double x_end);

/// |xi0|^(e^(n delta)) * B^((e^(n delta) - 1)/delta). Holds for sequences with
/// |xi_{i+1}| <= |xi_i|^(1+delta) B whenever xi0 * B^(1/delta) >= 1.
[[nodiscard]] double lemma1_bound(double xi0, double delta, double B, int n);

/// Natural log of lemma1_bound, usable where the bound overflows.
[[nodiscard]] double lemma1_log_bound(double xi0, double delta, double B, int n);

/// Exponent h^p N (e^(M|x-x0|) - 1)/M of the global error bound at x.
[[nodiscard]] double theorem_bound_exponent(double x, double h, double M, double N, double p, double x0);

/// True iff |ln e| stays below theorem_bound_exponent at every record.
[[nodiscard]] bool check_theorem_bound(const std::vector<ErrorRecord>& records, double M, double N, double p,
                                       double x0);

/// Smallest N for which check_theorem_bound holds on the given records.
[[nodiscard]] double fit_theorem_n(const std::vector<ErrorRecord>& records, double M, double p, double x0);

struct BenchSample {
    std::string problem;
    Method method = Method::mrk4;
    double h = 0.0;
    std::size_t steps = 0;
    double wall_time = 0.0;
    double final_rel_error = 0.0;
    /// Set when the solve failed; timing and error are then meaningless.
    std::optional<std::string> failure;
};

struct SweepOptions {
    int repeats = 5;
    int threads = 1;
    /// Problem integrated by Method::rk4 instead of ordinary_form(p).
    std::optional<OrdinaryIvp> baseline;
};

/// Median wall time (after a discarded warm-up run) and final relative error
/// per (method, h). Sorted by method, then h descending.
[[nodiscard]] std::vector<BenchSample> time_error_sweep(const MIvp& p, const std::vector<Method>& methods,
                                                        const std::vector<double>& h_list, double x_end,
                                                        const SweepOptions& opts = {});

/// CSV with header problem,method,h,steps,wall_time_s,final_rel_error.
[[nodiscard]] std::string bench_csv(const std::vector<BenchSample>& samples);

} // namespace mulrk
