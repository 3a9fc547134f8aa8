#include "mulrk/cli.hpp"

#include "mulrk/analysis.hpp"
#include "mulrk/errors.hpp"
#include "mulrk/expr.hpp"
#include "mulrk/format.hpp"
#include "mulrk/solvers.hpp"
#include "mulrk/tableau.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef MULRK_VERSION
#define MULRK_VERSION "0.0.0"
#endif

namespace mulrk::cli {

namespace {

std::string command_name(Command c) {
    switch (c) {
        case Command::solve: return "solve";
        case Command::compare: return "compare";
        case Command::convergence: return "convergence";
        case Command::bench: return "bench";
        case Command::list_problems: return "list-problems";
        case Command::validate_tableau: return "validate-tableau";
    }
    return "?";
}

double parse_real(const std::string& raw, const std::string& what) {
    const auto first = raw.find_first_not_of(" \t");
    const std::string text = first == std::string::npos ? "" : raw.substr(first, raw.find_last_not_of(" \t") - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse " + what + " '" + text + "' as a number");
    }
    if (used != text.size() || !std::isfinite(v)) {
        throw ConfigError("cannot parse " + what + " '" + text + "' as a finite number");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// Expression-defined problem. Evaluation failures surface as DomainError so
// the solvers treat them like any undefined derivative.
ProblemSpec expression_problem(const RunConfig& cfg) {
    ProblemSpec s;
    s.name = "expr";
    s.mivp.name = s.name;
    s.mivp.dim = 1;
    s.mivp.x0 = cfg.x0;
    const Complex y0 = parse_complex(cfg.y0);
    try {
        s.mivp.y0 = {from_complex(y0)};
    } catch (const DomainError&) {
        throw ConfigError("--y0 must be nonzero");
    }
    s.default_h = cfg.h.value_or(0.0);
    s.default_x_end = cfg.x_end.value_or(0.0);
    s.provenance = "command-line expression";

    if (cfg.mrhs) {
        const expr::Expr f = expr::parse(*cfg.mrhs);
        s.mrhs_expr = f.print();
        s.mivp.f_mult = [f](double x, std::span<const LogValue> y) {
            Complex v;
            try {
                v = f.eval(x, y[0].value());
            } catch (const expr::EvalError& e) {
                throw DomainError(std::string("--mrhs: ") + e.what() + " at x=" + format_g17(x), x);
            }
            if (v == Complex{0.0, 0.0}) {
                throw DomainError("--mrhs evaluates to 0 at x=" + format_g17(x), x);
            }
            return LogState{LogValue::from_log(std::log(v))};
        };
    } else {
        const expr::Expr g = expr::parse(*cfg.orhs);
        s.orhs_expr = g.print();
        auto eval_g = [g](double x, Complex y) {
            try {
                return g.eval(x, y);
            } catch (const expr::EvalError& e) {
                throw DomainError(std::string("--orhs: ") + e.what() + " at x=" + format_g17(x), x);
            }
        };
        s.mivp.g_ord = [eval_g](double x, std::span<const Complex> y) { return ComplexState{eval_g(x, y[0])}; };
        s.mivp.f_mult = [eval_g](double x, std::span<const LogValue> y) {
            return LogState{ordinary_to_mult_rhs(eval_g, x, y[0])};
        };
    }
    return s;
}

std::optional<MButcherTableau> load_tableau(const RunConfig& cfg) {
    if (cfg.tableau_path) {
        std::ifstream in(*cfg.tableau_path);
        if (!in) throw ConfigError("cannot open tableau file '" + *cfg.tableau_path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("tableau file is not valid JSON: ") + e.what());
        }
        return tableau_from_json(j);
    }
    if (cfg.builtin_tableau) {
        if (*cfg.builtin_tableau == "mrk4") return classical_mrk4();
        if (*cfg.builtin_tableau == "mrk2") return make_order2(0.5);
        throw ConfigError("unknown builtin tableau '" + *cfg.builtin_tableau + "' (expected mrk2 or mrk4)");
    }
    return std::nullopt;
}

Cell real_or_blank(double v) { return std::isfinite(v) ? Cell{v} : Cell{}; }

// Relative error of one value against the exact one, blank where undefined.
Cell rel_error_cell(const LogValue& eta, std::optional<Complex> exact) {
    if (!exact || *exact == Complex{0.0, 0.0}) return std::monostate{};
    if (!eta.is_finite()) return 1.0;
    const LogValue ly = from_complex(*exact, eta);
    return rel_error_from_log(mdiv(eta, ly).log());
}

std::optional<Complex> exact_at(const std::optional<ExactSolution>& exact, double x, std::size_t component) {
    if (!exact) return std::nullopt;
    return (*exact)(x).at(component);
}

void check_component(const RunConfig& cfg, std::size_t dim) {
    if (cfg.component >= dim) {
        throw ConfigError("--component " + std::to_string(cfg.component) + " is out of range for dimension " +
                          std::to_string(dim));
    }
}

Table solve_table(const RunConfig& cfg) {
    const ProblemSpec spec = build_problem(cfg);
    const double h = cfg.h.value_or(spec.default_h);
    const double x_end = cfg.x_end.value_or(spec.default_x_end);
    const auto tab = load_tableau(cfg);

    Trajectory tr;
    std::optional<ExactSolution> exact = spec.mivp.exact;
    std::size_t dim = spec.mivp.dim;
    if (cfg.hybrid) {
        if (cfg.method != Method::mrk4) throw ConfigError("--hybrid requires --method mrk4");
        tr = solve_hybrid(spec.mivp, h, x_end, cfg.hybrid_cfg);
    } else if (cfg.method == Method::rk4 && spec.baseline) {
        tr = solve_ordinary(*spec.baseline, h, x_end);
        exact = spec.baseline->exact;
        dim = spec.baseline->dim;
    } else {
        tr = solve(spec.mivp, cfg.method, h, x_end, tab);
    }
    check_component(cfg, dim);

    Table t;
    t.columns = {"x", "re", "im", "exact_re", "exact_im", "rel_error", "method_tag"};
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const LogValue& eta = tr.y[i][cfg.component];
        const Complex v = eta.value();
        const auto ex = exact_at(exact, tr.x[i], cfg.component);
        t.rows.push_back({tr.x[i], v.real(), v.imag(), ex ? Cell{ex->real()} : Cell{}, ex ? Cell{ex->imag()} : Cell{},
                          rel_error_cell(eta, ex), to_string(tr.meta[i].method)});
    }
    return t;
}

Table compare_trajectories(const RunConfig& cfg) {
    const ProblemSpec spec = build_problem(cfg);
    const double h = cfg.h.value_or(spec.default_h);
    const double x_end = cfg.x_end.value_or(spec.default_x_end);
    const auto tab = load_tableau(cfg);
    const OrdinaryIvp baseline = spec.baseline ? *spec.baseline : ordinary_form(spec.mivp);
    check_component(cfg, spec.mivp.dim);
    check_component(cfg, baseline.dim);

    const Trajectory m = solve(spec.mivp, Method::mrk4, h, x_end, tab);
    const Trajectory r = solve_ordinary(baseline, h, x_end);

    Table t;
    t.columns = {"x",      "exact_re", "exact_im",       "mrk4_re",      "mrk4_im",
                 "mrk4_rel_error", "rk4_re", "rk4_im", "rk4_rel_error"};
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double x = m.x[i];
        const auto ex = exact_at(spec.mivp.exact, x, cfg.component);
        const auto ex_b = exact_at(baseline.exact, x, cfg.component);
        const LogValue& a = m.y[i][cfg.component];
        const LogValue& b = r.y[i][cfg.component];
        t.rows.push_back({x, ex ? Cell{ex->real()} : Cell{}, ex ? Cell{ex->imag()} : Cell{}, a.value().real(),
                          a.value().imag(), rel_error_cell(a, ex), b.value().real(), b.value().imag(),
                          rel_error_cell(b, ex_b)});
    }
    return t;
}

Table read_table_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open CSV file '" + path + "'");
    try {
        return read_csv(in);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// Joins two CLI tables on their first column.
Table join_tables(const Table& a, const Table& b) {
    if (a.columns.empty() || b.columns.empty() || a.columns[0] != b.columns[0]) {
        throw ConfigError("--from-csv tables must share their first column");
    }
    Table t;
    t.columns.push_back(a.columns[0]);
    for (std::size_t i = 1; i < a.columns.size(); ++i) t.columns.push_back("a_" + a.columns[i]);
    for (std::size_t i = 1; i < b.columns.size(); ++i) t.columns.push_back("b_" + b.columns[i]);
    std::vector<std::pair<std::size_t, std::size_t>> common;
    for (std::size_t i = 1; i < a.columns.size(); ++i) {
        const std::size_t j = b.column(a.columns[i]);
        if (j < b.columns.size()) {
            common.emplace_back(i, j);
            t.columns.push_back("diff_" + a.columns[i]);
        }
    }
    auto as_double = [](const Cell& c) -> std::optional<double> {
        if (const auto* d = std::get_if<double>(&c)) return *d;
        if (const auto* n = std::get_if<std::int64_t>(&c)) return static_cast<double>(*n);
        return std::nullopt;
    };
    for (const auto& ra : a.rows) {
        const std::string key = format_cell(ra[0]);
        for (const auto& rb : b.rows) {
            if (format_cell(rb[0]) != key) continue;
            std::vector<Cell> row{ra[0]};
            row.insert(row.end(), ra.begin() + 1, ra.end());
            row.insert(row.end(), rb.begin() + 1, rb.end());
            for (const auto& [i, j] : common) {
                const auto da = as_double(ra[i]);
                const auto db = as_double(rb[j]);
                row.push_back(da && db ? Cell{*da - *db} : Cell{});
            }
            t.rows.push_back(std::move(row));
            break;
        }
    }
    return t;
}

Table convergence_table(const RunConfig& cfg) {
    const ProblemSpec spec = build_problem(cfg);
    if (!spec.mivp.exact) throw ConfigError("convergence needs a problem with an exact solution");
    const double h0 = cfg.h.value_or(spec.default_h);
    const double x_end = cfg.x_end.value_or(spec.default_x_end);
    if (cfg.levels < 2) throw ConfigError("--levels must be at least 2");
    check_component(cfg, spec.mivp.dim);

    std::optional<double> fitted;
    try {
        fitted = estimate_order(spec.mivp, cfg.method, h0, cfg.levels, x_end);
    } catch (const DegenerateError&) {
    }

    Table t;
    t.columns = {"h", "steps", "log_error", "rel_error", "pairwise_order", "fitted_order"};
    double h = h0;
    std::optional<double> prev_err;
    for (int l = 0; l < cfg.levels; ++l, h /= 2) {
        const Trajectory tr = solve(spec.mivp, cfg.method, h, x_end);
        const ErrorRecord r = global_error(tr, *spec.mivp.exact, cfg.component).back();
        Cell pairwise;
        if (prev_err && *prev_err > 0.0 && r.log_error > 0.0) pairwise = std::log2(*prev_err / r.log_error);
        t.rows.push_back({h, static_cast<std::int64_t>(tr.size() - 1), r.log_error, r.rel_error, pairwise,
                          fitted ? Cell{*fitted} : Cell{}});
        prev_err = r.log_error;
    }
    return t;
}

Table bench_table(const RunConfig& cfg) {
    const ProblemSpec spec = build_problem(cfg);
    const double h0 = cfg.h.value_or(spec.default_h);
    const double x_end = cfg.x_end.value_or(spec.default_x_end);
    std::vector<double> hs = cfg.h_list;
    if (hs.empty()) hs = {h0, h0 / 2, h0 / 4, h0 / 8};
    if (!spec.mivp.exact) throw ConfigError("bench needs a problem with an exact solution");
    if (cfg.repeats < 3) throw ConfigError("--repeats must be at least 3");

    SweepOptions opts;
    opts.repeats = cfg.repeats;
    opts.threads = cfg.threads;
    opts.baseline = spec.baseline;
    const auto samples = time_error_sweep(spec.mivp, cfg.methods, hs, x_end, opts);

    Table t;
    t.columns = {"problem", "method", "h", "steps", "wall_time_s", "final_rel_error"};
    for (const BenchSample& s : samples) {
        const bool ok = !s.failure;
        t.rows.push_back({s.problem, to_string(s.method), s.h, static_cast<std::int64_t>(s.steps),
                          ok ? Cell{s.wall_time} : Cell{}, ok ? real_or_blank(s.final_rel_error) : Cell{}});
        if (s.failure) std::cerr << "bench: " << to_string(s.method) << " h=" << format_g17(s.h) << " failed: " << *s.failure << '\n';
    }
    return t;
}

Table list_problems_table() {
    Table t;
    t.columns = {"name", "dim", "x0", "default_h", "default_x_end", "has_exact", "params", "provenance"};
    for (const ProblemSpec& s : registry()) {
        std::string params;
        for (const auto& [k, v] : s.params) {
            if (!params.empty()) params += ';';
            params += k + '=' + format_g17(v);
        }
        t.rows.push_back({s.name, static_cast<std::int64_t>(s.mivp.dim), s.mivp.x0, s.default_h, s.default_x_end,
                          std::string(s.mivp.exact ? "yes" : "no"), params, s.provenance});
    }
    return t;
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json config_echo(const RunConfig& cfg) {
    nlohmann::json j;
    j["command"] = command_name(cfg.command);
    if (cfg.problem) j["problem"] = *cfg.problem;
    if (cfg.mrhs) j["mrhs"] = *cfg.mrhs;
    if (cfg.orhs) j["orhs"] = *cfg.orhs;
    j["x0"] = cfg.x0;
    j["y0"] = cfg.y0;
    if (cfg.h) j["h"] = *cfg.h;
    if (cfg.x_end) j["x_end"] = *cfg.x_end;
    j["method"] = to_string(cfg.method);
    j["hybrid"] = cfg.hybrid;
    if (cfg.hybrid) {
        if (cfg.hybrid_cfg.zero_threshold) j["eps"] = *cfg.hybrid_cfg.zero_threshold;
        j["min_steps"] = cfg.hybrid_cfg.min_ordinary_steps;
        j["rearm"] = cfg.hybrid_cfg.rearm_factor;
    }
    if (cfg.tableau_path) j["tableau"] = *cfg.tableau_path;
    j["params"] = cfg.params;
    j["component"] = cfg.component;
    return j;
}

void emit(const RunConfig& cfg, const Table& t, std::ostream& out) {
    std::string text;
    if (cfg.format == Format::csv) {
        text = to_csv(t);
    } else {
        nlohmann::json j;
        j["manifest"] = {{"config", config_echo(cfg)}, {"timestamp", iso_timestamp()}, {"version", MULRK_VERSION}};
        j["columns"] = t.columns;
        j["rows"] = rows_to_json(t);
        text = j.dump(2) + '\n';
    }
    if (cfg.output) {
        std::ofstream f(*cfg.output, std::ios::binary);
        if (!f) throw ConfigError("cannot write '" + *cfg.output + "'");
        f << text;
    } else {
        out << text;
    }
}

void require_problem_source(const RunConfig& cfg) {
    const int sources = (cfg.problem ? 1 : 0) + (cfg.mrhs ? 1 : 0) + (cfg.orhs ? 1 : 0);
    if (sources != 1) {
        throw ConfigError("exactly one of --problem, --mrhs or --orhs is required");
    }
    if (!cfg.problem && !cfg.params.empty()) {
        throw ConfigError("--param applies to registry problems only");
    }
    if (!cfg.problem && (!cfg.h || !cfg.x_end)) {
        throw ConfigError("expression problems need --h and --x-end");
    }
    if (cfg.h && !(*cfg.h > 0.0)) throw ConfigError("--h must be positive");
}

} // namespace

Complex parse_complex(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.empty() || parts.size() > 2) throw ConfigError("expected 're' or 're,im', got '" + text + "'");
    const double re = parse_real(parts[0], "real part");
    const double im = parts.size() == 2 ? parse_real(parts[1], "imaginary part") : 0.0;
    return {re, im};
}

ProblemSpec build_problem(const RunConfig& cfg) {
    require_problem_source(cfg);
    if (cfg.problem) {
        try {
            return make_problem(*cfg.problem, cfg.params);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    return expression_problem(cfg);
}

int run(const RunConfig& cfg, std::ostream& out) {
    switch (cfg.command) {
        case Command::solve: emit(cfg, solve_table(cfg), out); return 0;
        case Command::compare:
            if (!cfg.from_csv.empty()) {
                if (cfg.from_csv.size() > 2) throw ConfigError("--from-csv accepts at most two files");
                const Table a = read_table_file(cfg.from_csv[0]);
                emit(cfg, cfg.from_csv.size() == 1 ? a : join_tables(a, read_table_file(cfg.from_csv[1])), out);
            } else {
                emit(cfg, compare_trajectories(cfg), out);
            }
            return 0;
        case Command::convergence: emit(cfg, convergence_table(cfg), out); return 0;
        case Command::bench: emit(cfg, bench_table(cfg), out); return 0;
        case Command::list_problems: emit(cfg, list_problems_table(), out); return 0;
        case Command::validate_tableau: {
            const auto tab = load_tableau(cfg);
            const MButcherTableau t = tab ? *tab : classical_mrk4();
            std::vector<Violation> v;
            if (t.stages() == 2) {
                v = validate_order2(t);
            } else if (t.stages() == 4) {
                v = validate_order4(t);
            } else {
                throw ConfigError("only 2- and 4-stage tableaus can be validated");
            }
            Table table;
            table.columns = {"condition", "residual", "inherited"};
            for (const Violation& viol : v) {
                table.rows.push_back({viol.condition, viol.residual, std::string(viol.inherited ? "yes" : "no")});
            }
            emit(cfg, table, out);
            return v.empty() ? 0 : 1;
        }
    }
    return 2;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
    RunConfig cfg;
    CLI::App app{"Multiplicative Runge-Kutta solvers for y* = f(x, y)", "mulrk"};
    // "-h" would collide with the step size option "--h".
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    std::string method = "mrk4";
    std::string format = "csv";
    std::vector<std::string> params;
    std::string methods = "mrk4,rk4";
    std::string h_list;
    std::optional<double> eps;

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--output,-o", cfg.output, "Write the artifact to this path instead of stdout");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_problem = [&](CLI::App* sub) {
        sub->add_option("--problem", cfg.problem, "Registry problem name (see list-problems)");
        sub->add_option("--mrhs", cfg.mrhs, "Multiplicative right-hand side f(x,y)");
        sub->add_option("--orhs", cfg.orhs, "Ordinary right-hand side g(x,y)");
        sub->add_option("--x0", cfg.x0, "Initial abscissa for expression problems");
        sub->add_option("--y0", cfg.y0, "Initial value 're' or 're,im' for expression problems");
        sub->add_option("--h", cfg.h, "Step size");
        sub->add_option("--x-end", cfg.x_end, "End of the integration interval");
        sub->add_option("--param", params, "Override a problem constant, key=value")->take_all();
        sub->add_option("--component", cfg.component, "State component to report");
        sub->add_option("--tableau", cfg.tableau_path, "JSON tableau {nodes, exponents, weights}");
        add_output(sub);
    };

    auto* solve = app.add_subcommand("solve", "Integrate one problem");
    add_problem(solve);
    solve->add_option("--method", method, "mrk2, mrk4 or rk4");
    solve->add_flag("--hybrid", cfg.hybrid, "Bypass roots with ordinary RK4");
    solve->add_option("--eps", eps, "Handover threshold on |y| (default 0.1*|y0|)");
    solve->add_option("--min-steps", cfg.hybrid_cfg.min_ordinary_steps, "Minimum ordinary steps per bypass");
    solve->add_option("--rearm", cfg.hybrid_cfg.rearm_factor, "Hand back once |y| > rearm*eps");

    auto* compare = app.add_subcommand("compare", "MRK4 against RK4 per grid point, or join CLI tables");
    add_problem(compare);
    compare->add_option("--from-csv", cfg.from_csv, "Re-read tables written by this tool (one or two)");

    auto* convergence = app.add_subcommand("convergence", "Error per halved step size and fitted order");
    add_problem(convergence);
    convergence->add_option("--method", method, "mrk2, mrk4 or rk4");
    convergence->add_option("--levels", cfg.levels, "Number of step sizes h, h/2, ...");

    auto* bench = app.add_subcommand("bench", "Wall time against final relative error");
    add_problem(bench);
    bench->add_option("--methods", methods, "Comma-separated methods");
    bench->add_option("--h-list", h_list, "Comma-separated step sizes (default h, h/2, h/4, h/8)");
    bench->add_option("--repeats", cfg.repeats, "Timed repeats per cell (>= 3)");
    auto* threads = bench->add_option("--threads", cfg.threads, "Worker threads for independent cells");

    auto* list = app.add_subcommand("list-problems", "Registry contents");
    add_output(list);

    auto* validate = app.add_subcommand("validate-tableau", "Check order conditions of a tableau");
    validate->add_option("--tableau", cfg.tableau_path, "JSON tableau file");
    validate->add_option("--builtin", cfg.builtin_tableau, "mrk2 or mrk4");
    add_output(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    for (CLI::App* sub : app.get_subcommands()) {
        if (sub->get_help_ptr() && sub->get_help_ptr()->count() > 0) {
            out << sub->help();
            return std::nullopt;
        }
    }

    if (*solve) cfg.command = Command::solve;
    if (*compare) cfg.command = Command::compare;
    if (*convergence) cfg.command = Command::convergence;
    if (*bench) cfg.command = Command::bench;
    if (*list) cfg.command = Command::list_problems;
    if (*validate) cfg.command = Command::validate_tableau;

    try {
        cfg.method = parse_method(method);
        cfg.methods.clear();
        for (const std::string& m : split(methods, ',')) cfg.methods.push_back(parse_method(m));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    cfg.format = format == "json" ? Format::json : Format::csv;
    for (const std::string& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got '" + p + "'");
        cfg.params[p.substr(0, eq)] = parse_real(p.substr(eq + 1), "--param " + p.substr(0, eq));
    }
    if (!h_list.empty()) {
        for (const std::string& h : split(h_list, ',')) cfg.h_list.push_back(parse_real(h, "--h-list entry"));
    }
    cfg.hybrid_cfg.zero_threshold = eps;
    try {
        cfg.hybrid_cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.threads < 1) throw ConfigError("--threads must be at least 1");
    const char* env = std::getenv("MULRK_THREADS");
    if (env && threads->count() == 0) {
        try {
            cfg.threads = std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            throw ConfigError(std::string("MULRK_THREADS must be an integer, got '") + env + "'");
        }
    }
    return cfg;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        const auto cfg = parse_args(argc, argv, out);
        if (!cfg) return 0;
        return run(*cfg, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const expr::SyntaxError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const expr::UnknownIdentifier& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const StepCountError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what();
        if (e.x()) err << "\nthe multiplicative derivative is undefined near x=" << format_g17(*e.x());
        err << "\nhint: retry with --hybrid to bypass roots of the solution with ordinary RK4\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace mulrk::cli
