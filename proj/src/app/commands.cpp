#include "ghostfd/app/commands.hpp"

#include "ghostfd/analytic.hpp"
#include "ghostfd/batch.hpp"
#include "ghostfd/errors.hpp"
#include "ghostfd/profile.hpp"
#include "ghostfd/stability.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ghostfd::app {

namespace {

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, double>) return number(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return v;
        },
        c);
}

nlohmann::json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return nullptr;
                return v;
            } else return v;
        },
        c);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

Cell count(std::size_t n) { return static_cast<long long>(n); }

std::optional<double> analytic_reference(const RunConfig& cfg) {
    const auto& m = cfg.market;
    if (!m.rate.is_constant() || !m.dividend.is_constant() || !m.vol.is_constant()) return std::nullopt;
    AnalyticInputs in;
    in.spot = m.spot;
    in.barrier = cfg.contract.barrier;
    in.rate = m.rate.sample(0.0);
    in.dividend = m.dividend.sample(0.0);
    in.vol = m.vol.sample(0.0);
    in.maturity = cfg.contract.maturity;
    in.rebate = cfg.contract.rebate;
    return one_touch_price(in).value;
}

std::string grid_name(const RunConfig& cfg) {
    return cfg.grid.kind == GridKind::BarrierOnNode ? "barrier-on-node" : "uniform-ghost";
}

}  // namespace

CommandOutput cmd_price(const RunConfig& cfg) {
    const SpatialGrid grid = make_grid(cfg);
    const SolveResult res = solve(cfg.market, cfg.contract, grid, cfg.scheme);
    const auto reference = analytic_reference(cfg);

    CommandOutput out;
    out.command = "price";
    out.table.columns = {"scheme", "grid", "space_steps", "time_steps", "smax", "spot", "price", "analytic",
                         "abs_error", "diverged", "diverged_at_step", "n_min_ghost", "n_min_standard"};

    Cell price, error;
    if (!res.diverged) {
        const double p = read_price(res, grid, cfg.market.spot);
        price = p;
        if (reference) error = std::abs(p - *reference);
    }
    Cell n_ghost, n_std;
    try {
        const StabilityReport rep = analyze(grid, cfg.market, cfg.contract);
        n_ghost = count(rep.n_min_ghost);
        n_std = count(rep.n_min_standard);
    } catch (const AssumptionViolated&) {
    }
    out.table.rows.push_back({std::string(to_string(cfg.scheme.kind)), grid_name(cfg), count(grid.steps()),
                              count(cfg.scheme.steps), grid.smax(), cfg.market.spot, price,
                              reference ? Cell(*reference) : Cell{}, error, res.diverged,
                              res.diverged_at_step ? count(*res.diverged_at_step) : Cell{}, n_ghost, n_std});
    out.summary.push_back(std::string(to_string(cfg.scheme.kind)) + " N=" + std::to_string(cfg.scheme.steps) +
                          (res.diverged ? ": diverged at step " + std::to_string(*res.diverged_at_step)
                                        : ": price " + cell_text(price) + " error " + cell_text(error)));
    return out;
}

CommandOutput cmd_table1(const RunConfig& cfg) {
    CommandOutput out;
    out.command = "table1";
    out.table.columns = {"smax", "eps", "eps_ratio", "n_theoretical", "n_actual", "status"};
    out.table.rows.resize(cfg.table1_smax.size());

    for_each_index(cfg.table1_smax.size(), Execution::Parallel, [&](std::size_t i) {
        const double smax = cfg.table1_smax[i];
        auto& row = out.table.rows[i];
        row = {smax, Cell{}, Cell{}, Cell{}, Cell{}, std::string("ok")};
        try {
            const SpatialGrid grid = build_uniform(smax, cfg.grid.steps, cfg.contract.barrier);
            const StabilityReport rep = analyze(grid, cfg.market, cfg.contract);
            row[1] = rep.epsilon;
            row[2] = rep.epsilon_ratio;
            row[3] = count(rep.n_min_ghost);
            row[4] = count(empirical_threshold(cfg.market, cfg.contract, grid, cfg.scheme.divergence_bound));
        } catch (const ghostfd::Error& e) {
            row[5] = std::string("failed: ") + e.what();
        }
    });

    PlotSpec plot{"Explicit-scheme thresholds vs S_max", "(L+ - S_{u-1}) / dS", "time steps", true, true, {}};
    PlotSeries theory{"theoretical", {}, true}, actual{"actual", {}, true};
    for (const auto& row : out.table.rows) {
        if (std::holds_alternative<double>(row[2]) && std::holds_alternative<long long>(row[3]))
            theory.points.emplace_back(std::get<double>(row[2]), static_cast<double>(std::get<long long>(row[3])));
        if (std::holds_alternative<double>(row[2]) && std::holds_alternative<long long>(row[4]))
            actual.points.emplace_back(std::get<double>(row[2]), static_cast<double>(std::get<long long>(row[4])));
        out.summary.push_back("smax " + cell_text(row[0]) + ": theoretical " + cell_text(row[3]) + ", actual " +
                              cell_text(row[4]) + " (" + cell_text(row[5]) + ")");
    }
    auto by_x = [](const auto& a, const auto& b) { return a.first < b.first; };
    std::sort(theory.points.begin(), theory.points.end(), by_x);
    std::sort(actual.points.begin(), actual.points.end(), by_x);
    plot.series = {theory, actual};
    out.plot = plot;
    return out;
}

std::vector<std::size_t> error_curve_steps(const ErrorCurveConfig& cfg) {
    std::vector<std::size_t> steps = cfg.steps;
    if (steps.empty()) {
        const double lo = std::log(static_cast<double>(cfg.n_min));
        const double hi = std::log(static_cast<double>(cfg.n_max));
        for (std::size_t j = 0; j < cfg.points; ++j) {
            const double f = cfg.points == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(cfg.points - 1);
            steps.push_back(static_cast<std::size_t>(std::llround(std::exp(lo + f * (hi - lo)))));
        }
        for (std::size_t j = 0; j < cfg.dense_points && cfg.dense_hi >= cfg.dense_lo; ++j) {
            const double f =
                cfg.dense_points == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(cfg.dense_points - 1);
            steps.push_back(cfg.dense_lo + static_cast<std::size_t>(std::llround(f * static_cast<double>(cfg.dense_hi - cfg.dense_lo))));
        }
    }
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    steps.erase(std::remove(steps.begin(), steps.end(), std::size_t{0}), steps.end());
    return steps;
}

CommandOutput cmd_error_curve(const RunConfig& cfg) {
    const SpatialGrid grid = make_grid(cfg);
    const auto reference = analytic_reference(cfg);
    if (!reference) throw ConfigError("error-curve needs constant market parameters for the analytic reference");

    const std::vector<std::size_t> steps = error_curve_steps(cfg.error_curve);
    std::vector<SolveJob> jobs;
    for (std::size_t n : steps) {
        SchemeConfig sc = cfg.scheme;
        sc.kind = SchemeKind::ExplicitEuler;
        sc.steps = n;
        sc.snapshot_steps.clear();
        jobs.push_back({grid, sc});
    }
    const auto results = solve_batch(cfg.market, cfg.contract, jobs, Execution::Parallel);

    CommandOutput out;
    out.command = "error-curve";
    out.table.columns = {"steps", "price", "abs_error", "diverged", "diverged_at_step"};
    PlotSeries series{"explicit, " + grid_name(cfg), {}, true};
    for (std::size_t j = 0; j < steps.size(); ++j) {
        const auto& r = results[j];
        Cell price, error;
        if (!r.diverged) {
            const double p = read_price(r, grid, cfg.market.spot);
            price = p;
            error = std::abs(p - *reference);
            series.points.emplace_back(static_cast<double>(steps[j]), std::abs(p - *reference));
        }
        out.table.rows.push_back(
            {count(steps[j]), price, error, r.diverged, r.diverged_at_step ? count(*r.diverged_at_step) : Cell{}});
    }
    const auto first_stable = std::find_if(results.begin(), results.end(), [](const auto& r) { return !r.diverged; });
    if (first_stable != results.end())
        out.summary.push_back("first non-diverging N in sweep: " +
                              std::to_string(steps[static_cast<std::size_t>(first_stable - results.begin())]));
    out.plot = PlotSpec{"Error at S(0) vs time steps (M=" + std::to_string(grid.steps()) + ")", "time steps",
                        "absolute error", true, true, {series}};
    return out;
}

CommandOutput cmd_profile(const RunConfig& cfg) {
    if (cfg.scheme.kind == SchemeKind::ExplicitEuler)
        throw ConfigError("profile expects scheme.kind = cn or trbdf2");
    const SpatialGrid grid = make_grid(cfg);
    SchemeConfig sc = cfg.scheme;
    sc.snapshot_steps = cfg.profile.snapshots;
    const SolveResult res = solve(cfg.market, cfg.contract, grid, sc);

    CommandOutput out;
    out.command = "profile";
    out.table.columns = {"step", "time", "kind", "node", "s", "value", "sign_changes"};
    PlotSpec plot{std::string(to_string(sc.kind)) + ", " + grid_name(cfg) + ", N=" + std::to_string(sc.steps),
                  "S", "V", false, false, {}};
    const double rebate = cfg.contract.rebate;
    for (const auto& snap : res.snapshots) {
        const auto profile = barrier_profile(snap.values, grid, rebate, cfg.profile.window);
        const auto changes = count_sign_changes(profile);
        PlotSeries series{"k=" + std::to_string(snap.step), {}, true};
        for (const auto& p : profile) {
            out.table.rows.push_back({count(snap.step), snap.time,
                                      std::string(p.kind == ProfilePointKind::Node ? "node" : "barrier"),
                                      count(p.node), p.s, p.value, count(changes)});
            series.points.emplace_back(p.s, p.value);
        }
        if (!grid.on_node()) {
            const std::size_t u = grid.barrier_index();
            out.table.rows.push_back({count(snap.step), snap.time, std::string("ghost"), count(u), grid.node(u),
                                      ghost_value(grid, snap.values[u - 1], rebate), count(changes)});
        }
        plot.series.push_back(std::move(series));
        out.summary.push_back("step " + std::to_string(snap.step) + ": sign changes near barrier = " +
                              std::to_string(changes));
    }
    out.plot = plot;
    return out;
}

void write_csv(const Table& table, std::ostream& out) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) out << (j ? "," : "") << csv_field(table.columns[j]);
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << csv_field(cell_text(row[j]));
        out << '\n';
    }
}

void write_json(const CommandOutput& output, std::ostream& out) {
    nlohmann::json doc;
    doc["command"] = output.command;
    doc["columns"] = output.table.columns;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : output.table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t j = 0; j < row.size(); ++j) obj[output.table.columns[j]] = cell_json(row[j]);
        doc["rows"].push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
}

int run_cli(int argc, const char* const* argv, const char* const* environ_block, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Finite-difference one-touch pricing with ghost-point stability diagnostics", "ghostfd"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> output_path, format, scheme, grid_kind;
    std::optional<std::size_t> steps, space_steps;
    std::optional<double> smax;
    bool svg = false;
    std::vector<std::string> sets;

    app.add_option("--config,-c", config_path, "INI config file")->check(CLI::ExistingFile);
    app.add_option("--output,-o", output_path, "output path ('-' for stdout)");
    app.add_option("--format,-f", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--svg", svg, "also write <output>.svg");
    app.add_option("--scheme", scheme, "explicit, cn or trbdf2");
    app.add_option("--steps,-n", steps, "time steps N");
    app.add_option("--space-steps,-m", space_steps, "space steps M");
    app.add_option("--smax", smax, "grid upper bound (hint for on-node grids)");
    app.add_option("--grid", grid_kind, "uniform or on_node");
    app.add_option("--set", sets, "override section.key=value (repeatable)");

    auto* price = app.add_subcommand("price", "FD price at S(0) vs analytic reference");
    auto* table1 = app.add_subcommand("table1", "theoretical and empirical explicit thresholds per S_max");
    auto* curve = app.add_subcommand("error-curve", "explicit-scheme error at S(0) over a sweep of N");
    auto* profile = app.add_subcommand("profile", "early-time slices near the barrier with monotonicity diagnostic");
    for (auto* sub : {price, table1, curve, profile}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        std::vector<KeyValues> layers;
        if (!config_path.empty()) layers.push_back(load_ini_file(config_path));
        layers.push_back(env_overrides(environ_block));
        KeyValues flags;
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos || s.find('.') > eq)
                throw ConfigError("--set expects section.key=value, got '" + s + "'");
            flags[s.substr(0, eq)] = s.substr(eq + 1);
        }
        if (output_path) flags["output.path"] = *output_path;
        if (format) flags["output.format"] = *format;
        if (svg) flags["output.svg"] = "true";
        if (scheme) flags["scheme.kind"] = *scheme;
        if (steps) flags["scheme.steps"] = std::to_string(*steps);
        if (space_steps) flags["grid.steps"] = std::to_string(*space_steps);
        if (smax) flags["grid.smax"] = number(*smax);
        if (grid_kind) flags["grid.kind"] = *grid_kind;
        layers.push_back(flags);
        const RunConfig cfg = build_config(layers);

        CommandOutput result;
        if (*price) result = cmd_price(cfg);
        else if (*table1) result = cmd_table1(cfg);
        else if (*curve) result = cmd_error_curve(cfg);
        else result = cmd_profile(cfg);

        std::ostringstream body;
        if (cfg.output_format == OutputFormat::Json)
            write_json(result, body);
        else
            write_csv(result.table, body);

        if (cfg.output_path == "-") {
            out << body.str();
        } else {
            std::ofstream file(cfg.output_path);
            if (!file) throw ConfigError("cannot write output file '" + cfg.output_path + "'");
            file << body.str();
            for (const auto& line : result.summary) err << line << '\n';
        }
        if (cfg.emit_svg && result.plot) {
            const std::string svg_path =
                (cfg.output_path == "-" ? std::string("ghostfd-") + result.command : cfg.output_path) + ".svg";
            std::ofstream file(svg_path);
            if (!file) throw ConfigError("cannot write svg file '" + svg_path + "'");
            file << render_svg(*result.plot);
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const BarrierBelowFirstCell& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ghostfd::Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace ghostfd::app
