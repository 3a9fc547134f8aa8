#include "mulrk/analysis.hpp"
#include "mulrk/errors.hpp"
#include "mulrk/problems.hpp"
#include "mulrk/solvers.hpp"
#include "mulrk/tableau.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

using namespace mulrk;

namespace {

Trajectory single_point(double x, Complex eta) {
    Trajectory tr;
    tr.problem = "manual";
    tr.h = 0.1;
    tr.x = {x};
    tr.y = {LogState{from_complex(eta)}};
    tr.meta = {{Method::mrk4, false}};
    return tr;
}

ExactSolution constant(Complex y) {
    return [y](double) { return ComplexState{y}; };
}

/// c * sqrt(x + 1): y' = c^2/(2y), so ln f = c^2/(2 y^2).
MIvp scaled_sqrt(double c) {
    MIvp p;
    p.name = "scaled_sqrt";
    p.y0 = {from_complex(c)};
    p.f_mult = [c](double, std::span<const LogValue> y) {
        const Complex v = y[0].value();
        return LogState{LogValue::from_log(c * c / (2.0 * v * v))};
    };
    p.exact = [c](double x) { return ComplexState{c * std::sqrt(x + 1.0)}; };
    return p;
}

MIvp constant_e() {
    MIvp p;
    p.name = "constant_e";
    p.y0 = {LogValue{}};
    p.f_mult = [](double, std::span<const LogValue>) { return LogState{LogValue{1.0, 0.0}}; };
    p.exact = [](double x) { return ComplexState{std::exp(x)}; };
    return p;
}

} // namespace

TEST_CASE("global_error examples") {
    SUBCASE("exact") {
        const auto r = global_error(single_point(3.0, 2.0), constant(2.0));
        REQUIRE(r.size() == 1);
        CHECK(r[0].log_error == 0.0);
        CHECK(r[0].rel_error == 0.0);
        CHECK(r[0].mult_error.log() == Complex{0.0, 0.0});
    }
    SUBCASE("sqrt table row at x=3") {
        const auto r = global_error(single_point(3.0, 2.0000034), constant(2.0));
        CHECK(r[0].rel_error == doctest::Approx(1.7e-6).epsilon(1e-6));
    }
    SUBCASE("Baranyi-type table row") {
        const auto r = global_error(single_point(1.25, 7.61823131), constant(7.62360992));
        CHECK(r[0].rel_error == doctest::Approx(7.055e-4).epsilon(1e-3));
        CHECK(r[0].rel_error * 100.0 == doctest::Approx(7.1e-2).epsilon(0.01));
    }
    SUBCASE("vanishing exact value") {
        CHECK_THROWS_AS((void)global_error(single_point(1.0, 0.5), constant(0.0)), DomainError);
    }
    SUBCASE("complex values measure phase too") {
        const auto r = global_error(single_point(0.0, Complex{0.0, 1.0}), constant(Complex{1.0, 0.0}));
        CHECK(r[0].log_error == doctest::Approx(M_PI / 2));
        CHECK(r[0].rel_error == doctest::Approx(std::sqrt(2.0)));
    }
}

TEST_CASE("rel_error_from_log avoids cancellation") {
    CHECK(rel_error_from_log(Complex{1e-12, 0.0}) == doctest::Approx(1e-12).epsilon(1e-10));
    CHECK(rel_error_from_log(Complex{0.0, 1e-13}) == doctest::Approx(1e-13).epsilon(1e-10));
    CHECK(rel_error_from_log(Complex{std::log(2.0), 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("metric consistency property") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.09, 0.09);
    for (int i = 0; i < 500; ++i) {
        const Complex y{1.0 + 3.0 * std::abs(u(rng)), u(rng)};
        const Complex eta = y * std::exp(Complex{u(rng), u(rng)} * 0.5);
        const ErrorRecord r = global_error(single_point(0.0, eta), constant(y))[0];
        CHECK(r.log_error >= 0.0);
        CHECK(r.rel_error >= 0.0);
        if (r.rel_error < 0.1) CHECK(std::abs(r.log_error - r.rel_error) <= r.rel_error * r.rel_error);
    }
}

TEST_CASE("exact-solution trajectory has unit error") {
    const MIvp p = lookup("sqrt").mivp;
    Trajectory tr;
    tr.problem = p.name;
    tr.h = 0.3;
    for (int i = 0; i <= 10; ++i) {
        const double x = 0.3 * i;
        tr.x.push_back(x);
        tr.y.push_back(LogState{from_complex((*p.exact)(x)[0])});
        tr.meta.push_back({Method::mrk4, false});
    }
    for (const ErrorRecord& r : global_error(tr, *p.exact)) CHECK(r.log_error <= 1e-14);
}

TEST_CASE("telescoped multiplicativity") {
    for (const char* name : {"sqrt", "second_order"}) {
        const ProblemSpec s = lookup(name);
        const double h = s.default_h;
        const Trajectory tr = solve(s.mivp, Method::mrk2, h, s.mivp.x0 + 5 * h);
        const auto rec = global_error(tr, *s.mivp.exact);
        for (std::size_t c = 0; c < s.mivp.dim; ++c) {
            const auto rc = global_error(tr, *s.mivp.exact, c);
            Complex product{1.0, 0.0};
            for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
                const Complex num_ratio = tr.y[k + 1][c].value() / tr.y[k][c].value();
                const Complex ex_ratio = (*s.mivp.exact)(tr.x[k + 1])[c] / (*s.mivp.exact)(tr.x[k])[c];
                product *= num_ratio / ex_ratio;
            }
            CHECK(std::abs(product - rc.back().mult_error.value()) <= 1e-12);
        }
        CHECK(rec.size() == 6);
    }
}

TEST_CASE("local_error") {
    SUBCASE("constant e") {
        const MIvp p = constant_e();
        const LogValue tau = local_error(p, 0.0, LogState{LogValue{}}, 0.3, classical_mrk4());
        CHECK(std::abs(tau.log()) <= 1e-14);
    }
    SUBCASE("sqrt problem at the origin") {
        const MIvp p = lookup("sqrt").mivp;
        const LogState y{from_complex(1.0)};
        const double e2 = std::abs(local_error(p, 0.0, y, 0.1, make_order2(0.5)).log());
        const double e4 = std::abs(local_error(p, 0.0, y, 0.1, classical_mrk4()).log());
        MESSAGE("local |ln tau|: mrk2 " << e2 << ", mrk4 " << e4);
        CHECK(e2 >= 1e-6);
        CHECK(e2 <= 1e-3);
        CHECK(e4 < e2);
        // Oracle: z' = exp(-2z)/2, z(0.1) = ln(1.1)/2, one textbook step, then
        // ln tau = (z(0.1) - z_1)/h.
        const double h = 0.1;
        auto F = [](double z) { return 0.5 * std::exp(-2.0 * z); };
        const double k1 = F(0.0), k2 = F(h / 2 * k1), k3 = F(h / 2 * k2), k4 = F(h * k3);
        const double z1 = h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        const double oracle4 = std::abs(0.5 * std::log(1.1) - z1) / h;
        CHECK(e4 == doctest::Approx(oracle4).epsilon(1e-6));
        CHECK(e4 <= 2e-7);
        const double z1_heun = h / 2 * (k1 + F(h * k1));
        CHECK(e2 == doctest::Approx(std::abs(0.5 * std::log(1.1) - z1_heun) / h).epsilon(1e-6));
    }
    SUBCASE("local order") {
        // |ln tau| ~ C h^p: halving h divides it by about 2^p.
        const MIvp p = lookup("sqrt").mivp;
        const LogState y{from_complex(1.0)};
        const double a = std::abs(local_error(p, 0.0, y, 0.1, classical_mrk4()).log());
        const double b = std::abs(local_error(p, 0.0, y, 0.05, classical_mrk4()).log());
        CHECK(std::log2(a / b) == doctest::Approx(4.0).epsilon(0.1));
        const double c = std::abs(local_error(p, 0.0, y, 0.1, make_order2(1.0)).log());
        const double d = std::abs(local_error(p, 0.0, y, 0.05, make_order2(1.0)).log());
        CHECK(std::log2(c / d) == doctest::Approx(2.0).epsilon(0.1));
    }
    SUBCASE("too few reference substeps") {
        const MIvp p = lookup("sqrt").mivp;
        CHECK_THROWS_AS((void)local_error(p, 0.0, LogState{from_complex(1.0)}, 0.1, classical_mrk4(), 32),
                        std::invalid_argument);
    }
}

TEST_CASE("estimate_order") {
    const MIvp p = lookup("sqrt").mivp;
    const double p4 = estimate_order(p, Method::mrk4, 0.2, 3, 3.0);
    const double p2 = estimate_order(p, Method::mrk2, 0.2, 3, 3.0);
    MESSAGE("fitted orders: mrk4 " << p4 << ", mrk2 " << p2);
    CHECK(p4 >= 3.8);
    CHECK(p4 <= 4.2);
    CHECK(p2 >= 1.8);
    CHECK(p2 <= 2.2);

    const ProblemSpec so = lookup("second_order");
    CHECK_THROWS_AS((void)estimate_order(so.mivp, Method::mrk4, 0.25, 3, 1.75), DegenerateError);

    CHECK_THROWS_AS((void)estimate_order(lookup("baranyi").mivp, Method::mrk4, 1.0, 3, 25.0), std::invalid_argument);
    CHECK_THROWS_AS((void)estimate_order(p, Method::mrk4, 0.2, 1, 3.0), std::invalid_argument);
}

TEST_CASE("estimate_order is invariant under rescaling") {
    const double base = estimate_order(scaled_sqrt(1.0), Method::mrk4, 0.2, 3, 3.0);
    for (double c : {0.25, 3.0, 40.0}) {
        CHECK(std::abs(estimate_order(scaled_sqrt(c), Method::mrk4, 0.2, 3, 3.0) - base) <= 0.05);
        CHECK(std::abs(estimate_order(scaled_sqrt(c), Method::mrk2, 0.2, 3, 3.0) -
                       estimate_order(scaled_sqrt(1.0), Method::mrk2, 0.2, 3, 3.0)) <= 0.05);
    }
}

TEST_CASE("lemma1_bound examples") {
    CHECK(lemma1_bound(0.7, 0.3, 5.0, 0) == doctest::Approx(0.7));
    CHECK(lemma1_bound(2.0, 1.0, 1.0, 1) == doctest::Approx(6.5809).epsilon(1e-4));
    CHECK(lemma1_bound(2.0, 1.0, 1.0, 1) == doctest::Approx(std::pow(2.0, std::exp(1.0))));
    CHECK(lemma1_log_bound(2.0, 1.0, 1.0, 1) == doctest::Approx(std::exp(1.0) * std::log(2.0)));
    CHECK(std::isinf(lemma1_bound(2.0, 1.0, 2.0, 8)));
    CHECK(std::isfinite(lemma1_log_bound(2.0, 1.0, 2.0, 8)));
}

TEST_CASE("lemma1_bound holds for generated sequences") {
    // Sequences |xi_{i+1}| = |xi_i|^(1+delta) B s_i with slack s_i in (0, 1],
    // drawn where xi0 * B^(1/delta) >= 1.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const double delta = 0.05 + 1.5 * u(rng);
        const double B = 0.2 + 3.0 * u(rng);
        const double xi0 = 0.05 + 3.0 * u(rng);
        if (std::log(xi0) + std::log(B) / delta < 0.0) continue;
        double log_xi = std::log(xi0);
        for (int n = 1; n <= 12; ++n) {
            log_xi = (1.0 + delta) * log_xi + std::log(B) + std::log(0.5 + 0.5 * u(rng));
            const double bound = lemma1_log_bound(xi0, delta, B, n);
            CHECK(log_xi <= bound + 1e-9 * std::max(1.0, std::abs(bound)));
            ++checked;
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("lemma1_bound needs xi0 * B^(1/delta) >= 1") {
    // xi0 = 1, B = 0.5, delta = 1: xi_1 = 1^2 * 0.5 = 0.5, but the bound is
    // 0.5^(e - 1) = 0.304.
    const double xi1 = std::pow(1.0, 2.0) * 0.5;
    CHECK(lemma1_bound(1.0, 1.0, 0.5, 1) == doctest::Approx(std::pow(0.5, std::exp(1.0) - 1.0)));
    CHECK(xi1 > lemma1_bound(1.0, 1.0, 0.5, 1));
}

TEST_CASE("lemma1_bound monotonicity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double xi0 = 1.0 + 2.0 * u(rng);
        const double B = 1.0 + 2.0 * u(rng);
        const double d = 0.05 + u(rng);
        const int n = 1 + static_cast<int>(5 * u(rng));
        const double base = lemma1_log_bound(xi0, d, B, n);
        CHECK(lemma1_log_bound(xi0 * 1.1, d, B, n) >= base);
        CHECK(lemma1_log_bound(xi0, d, B * 1.1, n) >= base);
        CHECK(lemma1_log_bound(xi0, d * 1.1, B, n) >= base);
        CHECK(lemma1_log_bound(xi0, d, B, n + 1) >= base);
    }
}

TEST_CASE("check_theorem_bound") {
    const MIvp p = lookup("sqrt").mivp;
    SUBCASE("exact trajectory") {
        const auto rec = global_error(single_point(3.0, 2.0), constant(2.0));
        for (double N : {1e-9, 1.0, 5.0}) CHECK(check_theorem_bound(rec, 0.5, N, 4.0, 0.0));
    }
    SUBCASE("fitted on h0, verified on h0/2") {
        const double M = 1.0;
        const auto coarse = global_error(solve(p, Method::mrk4, 0.3, 3.0), *p.exact);
        const auto fine = global_error(solve(p, Method::mrk4, 0.15, 3.0), *p.exact);
        const double N = fit_theorem_n(coarse, M, 4.0, 0.0);
        CHECK(N > 0.0);
        CHECK(check_theorem_bound(coarse, M, N, 4.0, 0.0));
        CHECK_FALSE(check_theorem_bound(coarse, M, 0.5 * N, 4.0, 0.0));
        // On the shared grid points the coarse constant covers the fine run.
        std::vector<ErrorRecord> shared;
        for (std::size_t i = 0; i < fine.size(); i += 2) shared.push_back(fine[i]);
        CHECK(check_theorem_bound(shared, M, N, 4.0, 0.0));
        // The first fine step is still pre-asymptotic: its error is about
        // 1/28 of the coarse one instead of 1/32, so it overshoots slightly.
        CHECK_FALSE(check_theorem_bound(fine, M, N, 4.0, 0.0));
        CHECK(check_theorem_bound(fine, M, 1.25 * N, 4.0, 0.0));
    }
    SUBCASE("N = 0 with nonzero errors") {
        const auto rec = global_error(solve(p, Method::mrk4, 0.3, 3.0), *p.exact);
        CHECK_FALSE(check_theorem_bound(rec, 1.0, 0.0, 4.0, 0.0));
    }
}

TEST_CASE("time_error_sweep") {
    const MIvp p = lookup("sqrt").mivp;
    SUBCASE("two methods, four steps") {
        const auto s = time_error_sweep(p, {Method::rk4, Method::mrk4}, {0.0375, 0.3, 0.075, 0.15}, 3.0, {3, 2, {}});
        REQUIRE(s.size() == 8);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK_FALSE(s[i].failure.has_value());
            CHECK(s[i].wall_time > 0.0);
            CHECK(s[i].problem == "sqrt");
        }
        CHECK(s[0].method == Method::mrk4);
        CHECK(s[4].method == Method::rk4);
        for (std::size_t i = 0; i < 8; i += 4) {
            CHECK(s[i].h == 0.3);
            CHECK(s[i].steps == 10);
            for (std::size_t k = i + 1; k < i + 4; ++k) {
                CHECK(s[k].h < s[k - 1].h);
                CHECK(s[k].final_rel_error < s[k - 1].final_rel_error);
            }
        }
    }
    SUBCASE("single cell") {
        const auto s = time_error_sweep(p, {Method::mrk2}, {0.3}, 3.0, {3, 1, {}});
        REQUIRE(s.size() == 1);
        CHECK(s[0].wall_time > 0.0);
    }
    SUBCASE("empty h list") {
        CHECK(time_error_sweep(p, {Method::mrk4}, {}, 3.0).empty());
    }
    SUBCASE("repeats below three") {
        CHECK_THROWS_AS((void)time_error_sweep(p, {Method::mrk4}, {0.3}, 3.0, {2, 1, {}}), std::invalid_argument);
    }
    SUBCASE("failed cells are recorded") {
        const auto s = time_error_sweep(p, {Method::mrk4}, {0.3, 0.7}, 3.0, {3, 1, {}});
        REQUIRE(s.size() == 2);
        CHECK(s[0].failure.has_value());
        CHECK_FALSE(s[1].failure.has_value());
    }
    SUBCASE("separate baseline") {
        const ProblemSpec so = lookup("second_order");
        SweepOptions o{3, 1, so.baseline};
        const auto s = time_error_sweep(so.mivp, {Method::mrk4, Method::rk4}, {0.25}, 1.75, o);
        REQUIRE(s.size() == 2);
        CHECK(s[1].final_rel_error == doctest::Approx(0.0129).epsilon(0.05));
    }
}

TEST_CASE("bench_csv") {
    BenchSample a{"sqrt", Method::mrk4, 0.3, 10, 1.5e-6, 1.6888e-6, std::nullopt};
    BenchSample b{"sqrt", Method::rk4, 0.7, 0, 0.0, 0.0, std::string("bad grid")};
    auto g17 = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    const std::string csv = bench_csv({a, b});
    CHECK(csv == "problem,method,h,steps,wall_time_s,final_rel_error\n"
                 "sqrt,mrk4," + g17(0.3) + ",10," + g17(1.5e-6) + "," + g17(1.6888e-6) + "\n"
                 "sqrt,rk4," + g17(0.7) + ",0,,\n");
}
