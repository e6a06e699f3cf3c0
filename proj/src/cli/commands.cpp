#include "mongelab/cli.hpp"

#include "mongelab/characteristics.hpp"
#include "mongelab/error.hpp"
#include "mongelab/extradim.hpp"
#include "mongelab/implicit.hpp"
#include "mongelab/numerics.hpp"
#include "mongelab/series.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace mongelab::cli {

namespace {

// Runs fn(i) for i in [0, n) on up to thread_cap() threads.
template <class F>
void parallel_for(std::size_t n, F&& fn)
{
    const unsigned nt = std::min<std::size_t>(thread_cap(), std::max<std::size_t>(n, 1));
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(nt);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nt; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += nt)
                    fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

std::vector<double> grid(const Interval& r, int n)
{
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = i == n - 1 ? r.hi : r.lo + r.width() * i / (n - 1);
    return xs;
}

bool skippable(const Error& e)
{
    switch (e.code()) {
    case ErrorCode::KinkError:
    case ErrorCode::PoleError:
    case ErrorCode::DomainError:
    case ErrorCode::NoRoot: return true;
    default: return false;
    }
}

struct Value {
    double u;
    long long branch;
};

std::optional<double> extradim_value(const RunConfig& cfg, double x, double t)
{
    auto at_order = [&](int n) {
        const DoubledField f = lift(cfg.profile, cfg.pressure, x, n, n);
        return extract_u(evolve(f, t)).value();
    };
    const double u = at_order(cfg.order);
    const double v = at_order(cfg.order - std::max(2, cfg.order / 4));
    if (!std::isfinite(u) || std::abs(u - v) > 1e-8 * std::max(1.0, std::abs(u)))
        return std::nullopt;
    return u;
}

} // namespace

Table cmd_evolve(const RunConfig& cfg)
{
    cfg.validate();
    const bool all = cfg.solver == SolverChoice::All;
    auto wants = [&](SolverChoice s) { return all || cfg.solver == s; };
    const auto xs = grid(cfg.x_range, cfg.n_samples);

    // Series coefficients do not depend on t.
    std::vector<std::optional<TimeSeries>> series(xs.size());
    bool series_on = wants(SolverChoice::Series);
    if (series_on) {
        try {
            parallel_for(xs.size(), [&](std::size_t i) {
                try {
                    series[i] = build_series(cfg.profile, cfg.pressure, xs[i], cfg.order);
                } catch (const Error& e) {
                    if (!skippable(e))
                        throw;
                }
            });
        } catch (const Error& e) {
            if (!all || e.code() != ErrorCode::UnsupportedVariant)
                throw;
            series_on = false;
        }
    }

    std::optional<ImplicitRelation> rel;
    if (wants(SolverChoice::Implicit)) {
        try {
            rel = make_relation(cfg.pressure, relation_G_for_profile(cfg.profile, cfg.pressure));
        } catch (const Error& e) {
            if (!all || e.code() != ErrorCode::UnsupportedVariant)
                throw;
        }
    }
    bool extradim_on = wants(SolverChoice::Extradim);

    std::vector<std::vector<std::vector<Cell>>> per_time(cfg.times.size());
    parallel_for(cfg.times.size(), [&](std::size_t it) {
        const double t = cfg.times[it];
        std::optional<FrontCurve> front;
        if (wants(SolverChoice::Characteristics)) {
            const int n = std::max(4096, 4 * cfg.n_samples);
            front = evolve_front(cfg.profile, cfg.pressure, t, default_seeds(cfg.profile, cfg.pressure, t, n, cfg.x_range));
        }
        auto& rows = per_time[it];
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            const double x = xs[ix];
            std::vector<std::pair<std::string, std::vector<Value>>> found;
            if (series_on && series[ix]) {
                const SeriesValue sv = eval_series(*series[ix], t);
                std::vector<Value> v;
                if (!sv.diverging && sv.err <= 1e-8 * std::max(1.0, std::abs(sv.u)))
                    v.push_back({sv.u, 0});
                found.push_back({"series", v});
            }
            if (rel) {
                std::vector<Value> v;
                try {
                    const URoots r = solve_u(*rel, x, t, default_u_range(cfg.profile, cfg.pressure, x, t));
                    for (const auto& root : r.roots)
                        v.push_back({root.u, root.branch});
                } catch (const Error& e) {
                    if (!skippable(e))
                        throw;
                }
                found.push_back({"implicit", v});
            }
            if (front) {
                std::vector<Value> v;
                const PointValues pv = solve_on_front(*front, x);
                for (std::size_t b = 0; b < pv.u.size(); ++b)
                    v.push_back({pv.u[b], static_cast<long long>(b)});
                found.push_back({"characteristics", v});
            }
            if (extradim_on) {
                std::vector<Value> v;
                try {
                    if (auto u = extradim_value(cfg, x, t))
                        v.push_back({*u, 0});
                } catch (const Error& e) {
                    if (!skippable(e) && !(all && e.code() == ErrorCode::UnsupportedVariant))
                        throw;
                }
                found.push_back({"extradim", v});
            }

            Cell disc;
            if (all) {
                bool single = true;
                std::vector<double> principal;
                for (const auto& [name, v] : found) {
                    if ((name == "implicit" || name == "characteristics") && v.size() > 1)
                        single = false;
                    if (v.size() == 1)
                        principal.push_back(v.front().u);
                }
                if (single && principal.size() >= 2) {
                    const auto [lo, hi] = std::minmax_element(principal.begin(), principal.end());
                    disc = *hi - *lo;
                }
            }
            for (const auto& [name, v] : found)
                for (const auto& val : v) {
                    std::vector<Cell> row{t, x, val.u, val.branch, name};
                    if (all)
                        row.push_back(disc);
                    rows.push_back(std::move(row));
                }
        }
    });

    Table table;
    table.columns = {"t", "x", "u", "branch", "solver"};
    if (all)
        table.columns.push_back("discrepancy");
    for (auto& rows : per_time)
        for (auto& r : rows)
            table.rows.push_back(std::move(r));
    return table;
}

Table cmd_breaktime(const RunConfig& cfg)
{
    cfg.validate();
    const auto xs = grid(cfg.x_range, cfg.n_samples);
    std::vector<std::vector<Cell>> rows(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
        const double x = xs[i];
        Cell closed, ratio, rel;
        std::string status = "ok";
        double c = NAN;
        try {
            c = break_time_closed(cfg.profile, cfg.pressure, x);
            closed = c;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoBreak && e.code() != ErrorCode::UnsupportedVariant && !skippable(e))
                throw;
            status = std::string(error_name(e.code()));
        }
        try {
            const double r = break_time_ratio(build_series(cfg.profile, cfg.pressure, x, cfg.order));
            ratio = r;
            if (std::isfinite(c))
                rel = std::abs(r - c) / std::abs(c);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InsufficientData && !skippable(e))
                throw;
            if (status == "ok")
                status = std::string(error_name(e.code()));
        }
        rows[i] = {x, closed, ratio, rel, status};
    });
    Table t;
    t.columns = {"x", "t_break_closed", "t_break_ratio", "rel_diff", "status"};
    t.rows = std::move(rows);
    return t;
}

Table cmd_front_face(const RunConfig& cfg)
{
    cfg.validate();
    const auto* e = std::get_if<Exponential>(&cfg.profile.v);
    if (!e)
        throw Error(ErrorCode::UnsupportedVariant, "cli", "front-face needs an exponential profile");
    Table table;
    table.columns = {"t", "x_face", "u_face"};
    const double edge = -std::exp(-1.0);
    for (double t : cfg.times) {
        Cell xf, uf;
        if (t > 0.0) {
            double x = NAN;
            if (cfg.pressure.kind == PressureSpec::Kind::None) {
                x = front_face_position(e->A, e->L, t);
            } else {
                auto h = [&](double z) { return lambert_front_argument(e->A, e->L, cfg.pressure, z, t) - edge; };
                const auto br = numerics::scan_brackets(h, cfg.x_range.lo, cfg.x_range.hi, 4096);
                if (!br.empty())
                    x = br.front().lo == br.front().hi ? br.front().lo : numerics::bisect(h, br.front().lo, br.front().hi, 1e-15);
            }
            if (std::isfinite(x)) {
                xf = x;
                uf = lambert_front(e->A, e->L, cfg.pressure, x, t, Branch::W0);
            }
        }
        table.rows.push_back({t, xf, uf});
    }
    return table;
}

Table cmd_shock(const RunConfig& cfg)
{
    cfg.validate();
    Table table;
    table.columns = {"t", "status", "position", "u_left", "u_right", "speed", "area_residual", "area"};
    std::vector<std::vector<Cell>> rows(cfg.times.size());
    parallel_for(cfg.times.size(), [&](std::size_t i) {
        const double t = cfg.times[i];
        const auto seeds = default_seeds(cfg.profile, cfg.pressure, t, std::max(4096, cfg.n_samples));
        const FrontCurve f = evolve_front(cfg.profile, cfg.pressure, t, seeds);
        try {
            const ShockFit s = equal_area_shock(f);
            rows[i] = {t, std::string("ok"), s.position, s.u_left, s.u_right, -(s.u_left + s.u_right) / 2,
                       s.area_residual, bump_area(f, s)};
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotMultivalued && e.code() != ErrorCode::MultipleFolds)
                throw;
            rows[i] = {t, std::string(error_name(e.code())), Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, bump_area(f)};
        }
    });
    table.rows = std::move(rows);
    return table;
}

namespace {

void emit(const Table& t, const RunConfig& cfg, std::ostream& out)
{
    if (cfg.output.empty() || cfg.output == "-") {
        cfg.format == OutputFormat::Json ? write_json(out, t) : write_csv(out, t);
        return;
    }
    std::ofstream f(cfg.output);
    if (!f)
        throw Error(ErrorCode::ConfigError, "cli", "cannot open output file " + cfg.output);
    cfg.format == OutputFormat::Json ? write_json(f, t) : write_csv(f, t);
}

struct Flags {
    std::string config;
    std::string profile, pressure, times, solver, out, format, svg;
    std::optional<double> t, x_min, x_max, tol;
    std::optional<int> n, order;
    bool flip = false;
};

void add_common(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config, "JSON run configuration");
    sub->add_option("--profile", f.profile, "initial profile: segment:A,B exp:A,L pwl:X,U;... jet:X0;C,... or JSON");
    sub->add_option("--pressure", f.pressure, "driver: none const:K linear:K time:K0,.. poly:G0,.. or JSON");
    sub->add_option("--t", f.t, "single time");
    sub->add_option("--times", f.times, "comma list or a:b:step");
    sub->add_option("--x-min", f.x_min, "left end of the x grid");
    sub->add_option("--x-max", f.x_max, "right end of the x grid");
    sub->add_option("--n", f.n, "number of samples");
    sub->add_option("--order", f.order, "series and kernel order");
    sub->add_option("--solver", f.solver, "series|implicit|characteristics|extradim|all");
    sub->add_option("--out", f.out, "output path (default stdout)");
    sub->add_option("--format", f.format, "csv|json");
    sub->add_option("--tol", f.tol, "replace every verification bound");
}

RunConfig resolve(const Flags& f)
{
    RunConfig cfg;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in)
            throw Error(ErrorCode::ConfigError, "config", "cannot read " + f.config);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::ConfigError, "config", e.what());
        }
        cfg = run_config_from_json(j, cfg);
    }
    if (!f.profile.empty())
        cfg.profile = parse_profile(f.profile);
    if (!f.pressure.empty())
        cfg.pressure = parse_pressure(f.pressure);
    if (!f.times.empty())
        cfg.times = parse_times(f.times);
    if (f.t)
        cfg.times = {*f.t};
    if (f.x_min)
        cfg.x_range.lo = *f.x_min;
    if (f.x_max)
        cfg.x_range.hi = *f.x_max;
    if (f.n)
        cfg.n_samples = *f.n;
    if (f.order)
        cfg.order = *f.order;
    if (!f.solver.empty())
        cfg.solver = parse_solver(f.solver);
    if (!f.out.empty())
        cfg.output = f.out;
    if (f.format == "csv")
        cfg.format = OutputFormat::Csv;
    else if (f.format == "json")
        cfg.format = OutputFormat::Json;
    else if (!f.format.empty())
        throw Error(ErrorCode::ConfigError, "config", "format must be csv or json");
    cfg.validate();
    return cfg;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cross-validating solvers for u_t = u u_x + g"};
    app.require_subcommand(1);
    Flags f;
    auto* evolve = app.add_subcommand("evolve", "evolve the profile and tabulate u(x, t)");
    auto* breaktime = app.add_subcommand("breaktime", "closed-form and ratio-test break times");
    auto* face = app.add_subcommand("front-face", "position of the vertical face of an exponential front");
    auto* shock = app.add_subcommand("shock", "equal-area shock fits");
    auto* verify = app.add_subcommand("verify", "run the invariant suites");
    for (auto* s : {evolve, breaktime, face, shock, verify})
        add_common(s, f);
    evolve->add_option("--svg", f.svg, "also write an SVG rendering");
    verify->add_flag("--inject-g-sign-flip", f.flip, "flip the sign of g inside the characteristics suite")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        const int code = app.exit(e, msg, msg);
        err << msg.str();
        return code == 0 ? 0 : 2;
    }

    try {
        const RunConfig cfg = resolve(f);
        if (evolve->parsed()) {
            const Table t = cmd_evolve(cfg);
            emit(t, cfg, out);
            if (!f.svg.empty()) {
                std::ofstream svg(f.svg);
                if (!svg)
                    throw Error(ErrorCode::ConfigError, "cli", "cannot open " + f.svg);
                svg << render_svg(t);
            }
        } else if (breaktime->parsed()) {
            emit(cmd_breaktime(cfg), cfg, out);
        } else if (face->parsed()) {
            emit(cmd_front_face(cfg), cfg, out);
        } else if (shock->parsed()) {
            emit(cmd_shock(cfg), cfg, out);
        } else {
            VerifyOptions vo;
            vo.tol = f.tol;
            vo.flip_g_sign = f.flip;
            const VerifyReport r = cmd_verify(cfg, vo);
            emit(report_table(r), cfg, out);
            return r.all_pass() ? 0 : 4;
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::ConfigError ? 2 : 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace mongelab::cli
