#include "mulrk/errors.hpp"
#include "mulrk/geomcalc.hpp"
#include "mulrk/hybrid.hpp"
#include "mulrk/problems.hpp"
#include "mulrk/solvers.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace mulrk;

namespace {

Complex sample(const Trajectory& tr, std::size_t i) {
    const LogValue& v = tr.y[i][0];
    if (std::isinf(v.log_mag) && v.log_mag < 0) return {};
    return v.value();
}

/// Root-crossing problem given only through f, so the ordinary form is derived.
MIvp derived_root_cross(double rate) {
    MIvp p = lookup("root_cross").mivp;
    p.name = "root_cross_derived";
    p.g_ord.reset();
    p.f_mult = [rate](double, std::span<const LogValue> y) {
        return LogState{LogValue::from_log(-rate / y[0].value())};
    };
    return p;
}

} // namespace

TEST_CASE("detect_handover examples") {
    const std::vector<double> eps{0.1};
    const LogState one{from_complex(1.0)};
    const LogState small{from_complex(0.05)};
    const LogState tiny{from_complex(1e-9)};
    const LogState finite_f{LogValue::from_log(0.5)};
    const LogState bad_f{LogValue{std::numeric_limits<double>::infinity(), 0.0}};
    const LogState huge_f{LogValue::from_log(101.0)};

    CHECK_FALSE(detect_handover(one, std::span<const LogValue>(finite_f), eps));
    CHECK(detect_handover(small, std::span<const LogValue>(finite_f), eps));
    CHECK(detect_handover(tiny, std::span<const LogValue>(bad_f), eps));
    CHECK(detect_handover(one, std::span<const LogValue>(bad_f), eps));
    CHECK(detect_handover(one, std::nullopt, eps));
    // |ln f| = 101 > 1/eps^2 = 100
    CHECK(detect_handover(one, std::span<const LogValue>(huge_f), eps));
    CHECK_FALSE(detect_handover(one, std::span<const LogValue>(LogState{LogValue::from_log(99.0)}), eps));
}

TEST_CASE("config validation") {
    HybridConfig c;
    CHECK_NOTHROW(c.validate());
    c.zero_threshold = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.min_ordinary_steps = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.rearm_factor = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    const MIvp p = lookup("root_cross").mivp;
    CHECK_THROWS_AS((void)solve_hybrid(p, 0.05, 2.0, c), std::invalid_argument);
    CHECK_THROWS_AS((void)solve_hybrid(p, 0.3, 2.0), StepCountError);

    HybridConfig d;
    const std::vector<double> eps = d.thresholds(LogState{from_complex(-4.0)});
    CHECK(eps[0] == doctest::Approx(0.4));
    d.zero_threshold = 0.2;
    CHECK(d.thresholds(LogState{from_complex(-4.0)})[0] == 0.2);
}

TEST_CASE("plain mrk4 fails at the root") {
    const MIvp p = lookup("root_cross").mivp;
    try {
        (void)solve(p, Method::mrk4, 0.05, 2.0);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        REQUIRE(e.x().has_value());
        CHECK(*e.x() == doctest::Approx(1.0).epsilon(0.06));
    }
}

TEST_CASE("root crossing: tags, sign flip and accuracy") {
    const MIvp p = lookup("root_cross").mivp;
    const Trajectory tr = solve_hybrid(p, 0.05, 2.0);
    REQUIRE(tr.size() == 41);
    CHECK(tr.x.back() == 2.0);

    // Tags form one mrk4 -> rk4 -> mrk4 run sequence.
    std::vector<Method> runs;
    for (const StepMeta& m : tr.meta) {
        if (runs.empty() || runs.back() != m.method) runs.push_back(m.method);
    }
    REQUIRE(runs.size() == 3);
    CHECK(runs[0] == Method::mrk4);
    CHECK(runs[1] == Method::rk4);
    CHECK(runs[2] == Method::mrk4);

    // rk4 samples sit around x = 1 and only there.
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.meta[i].method == Method::rk4) CHECK(std::abs(tr.x[i] - 1.0) < 0.2);
        if (std::abs(tr.x[i] - 1.0) < 0.05) CHECK(tr.meta[i].method == Method::rk4);
    }

    int flips = 0;
    double prev = 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const Complex y = sample(tr, i);
        if (y.real() != 0.0) {
            if (y.real() * prev < 0) ++flips;
            prev = y.real();
        }
        worst = std::max(worst, std::abs(y - Complex{1.0 - tr.x[i], 0.0}));
    }
    CHECK(flips == 1);
    // MRK4 on ln f = -1/y carries a few 1e-6 of error into the band; the
    // ordinary steps across the root add nothing on this linear problem.
    CHECK(worst < 1e-5);
    CHECK(sample(tr, tr.size() - 1).real() == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("ordinary steps across the root are exact") {
    const MIvp p = lookup("root_cross").mivp;
    const Trajectory tr = solve_hybrid(p, 0.05, 2.0);
    // Within a run of rk4 samples, increments equal -h exactly up to rounding.
    for (std::size_t i = 1; i < tr.size(); ++i) {
        if (tr.meta[i].method != Method::rk4 || tr.meta[i - 1].method != Method::rk4) continue;
        const Complex d = sample(tr, i) - sample(tr, i - 1);
        CHECK(d.real() == doctest::Approx(-0.05).epsilon(1e-12));
    }
}

TEST_CASE("away from the band hybrid equals mrk4 bitwise") {
    for (const char* name : {"sqrt", "baranyi"}) {
        const ProblemSpec s = lookup(name);
        const Trajectory a = solve_hybrid(s.mivp, s.default_h, s.default_x_end);
        const Trajectory b = solve(s.mivp, Method::mrk4, s.default_h, s.default_x_end);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a.x[i] == b.x[i]);
            CHECK(a.meta[i].method == Method::mrk4);
            CHECK_FALSE(a.meta[i].handover);
            for (std::size_t c = 0; c < a.y[i].size(); ++c) {
                CHECK(a.y[i][c].log_mag == b.y[i][c].log_mag);
                CHECK(a.y[i][c].arg == b.y[i][c].arg);
            }
        }
    }
}

TEST_CASE("handover round trip is lossless") {
    const MIvp p = lookup("root_cross").mivp;
    const OrdinaryIvp o = ordinary_form(p);
    for (double yv : {0.09, 0.5, -0.2, 3.0}) {
        const LogValue y = from_complex(yv);
        const ComplexState g = o.g(0.0, ComplexState{Complex{yv, 0.0}});
        const LogValue ystar = LogValue::from_log(g[0] / Complex{yv, 0.0});
        const auto [back_y, back_g] = mult_to_ordinary_state(y, ystar);
        CHECK(std::abs(back_y - Complex{yv, 0.0}) <= 1e-13 * std::abs(yv));
        CHECK(std::abs(back_g - g[0]) <= 1e-13 * std::abs(g[0]));
        const LogValue relifted = from_complex(back_y, y);
        CHECK(std::abs(relifted.log() - y.log()) < 1e-13);
    }
}

TEST_CASE("handover marks and hysteresis") {
    const MIvp p = lookup("root_cross").mivp;
    HybridConfig cfg;
    cfg.min_ordinary_steps = 5;
    cfg.rearm_factor = 2.0;
    const Trajectory tr = solve_hybrid(p, 0.05, 2.0, cfg);
    int marks = 0;
    std::size_t rk4_count = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (tr.meta[i].handover) ++marks;
        if (tr.meta[i].method == Method::rk4) ++rk4_count;
    }
    CHECK(marks == 2);
    CHECK(rk4_count >= 5);
    // The hand back happens only once |y| > 2 * 0.1.
    for (std::size_t i = 1; i < tr.size(); ++i) {
        if (tr.meta[i].method == Method::mrk4 && tr.meta[i - 1].method == Method::rk4) {
            CHECK(std::abs(sample(tr, i - 1)) > 0.2);
        }
    }
}

TEST_CASE("derived ordinary form") {
    // Root between grid points: the derived g = y ln f = -1 works.
    const Trajectory tr = solve_hybrid(derived_root_cross(1.0), 0.03, 2.01);
    CHECK(sample(tr, tr.size() - 1).real() == doctest::Approx(-1.01).epsilon(1e-4));

    // A state that is exactly 0+0i at a grid point leaves the derived form
    // without a value for ln f.
    MIvp at_zero = derived_root_cross(1.0);
    at_zero.y0 = {LogValue{-std::numeric_limits<double>::infinity(), 0.0}};
    HybridConfig cfg;
    cfg.zero_threshold = 0.1;
    CHECK_THROWS_AS((void)solve_hybrid(at_zero, 0.05, 1.0, cfg), UnrecoverableZero);

    // With an explicit ordinary form the same start is fine.
    MIvp with_g = lookup("root_cross").mivp;
    with_g.y0 = at_zero.y0;
    const Trajectory ok = solve_hybrid(with_g, 0.05, 1.0, cfg);
    CHECK(sample(ok, ok.size() - 1).real() == doctest::Approx(-1.0).epsilon(1e-5));
}
