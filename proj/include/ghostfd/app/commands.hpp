#pragma once

#include "ghostfd/app/config.hpp"
#include "ghostfd/app/svg.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ghostfd::app {

/// Empty cells are written as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct CommandOutput {
    std::string command;
    Table table;
    /// Human-readable summary lines printed to stderr when output goes to a file.
    std::vector<std::string> summary;
    std::optional<PlotSpec> plot;
};

/// FD price at S(0) against the closed form.
/// Columns: scheme, grid, space_steps, time_steps, smax, spot, price, analytic, abs_error,
///          diverged, diverged_at_step, n_min_ghost, n_min_standard.
[[nodiscard]] CommandOutput cmd_price(const RunConfig& cfg);

/// Stability thresholds per S_max. Columns: smax, eps, eps_ratio, n_theoretical, n_actual, status.
[[nodiscard]] CommandOutput cmd_table1(const RunConfig& cfg);

/// Explicit-scheme error at S(0) per N. Columns: steps, price, abs_error, diverged, diverged_at_step.
[[nodiscard]] CommandOutput cmd_error_curve(const RunConfig& cfg);

/// Early-time slices next to the barrier.
/// Columns: step, time, kind, node, s, value, sign_changes.
/// kind is "node", "barrier" (L+, rebate) or "ghost" (interpolated value at S_u, reporting only).
[[nodiscard]] CommandOutput cmd_profile(const RunConfig& cfg);

/// Step counts swept by error-curve: log-spaced points plus a dense band, sorted and unique.
[[nodiscard]] std::vector<std::size_t> error_curve_steps(const ErrorCurveConfig& cfg);

void write_csv(const Table& table, std::ostream& out);
void write_json(const CommandOutput& output, std::ostream& out);

/// Entry point shared by the executable and the tests. Returns the process exit status:
/// 0 ran (divergence is data), 1 numerical failure, 2 usage or config error.
int run_cli(int argc, const char* const* argv, const char* const* environ_block, std::ostream& out,
            std::ostream& err);

}  // namespace ghostfd::app
