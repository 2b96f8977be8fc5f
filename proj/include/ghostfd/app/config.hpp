#pragma once

#include "ghostfd/grid.hpp"
#include "ghostfd/schemes.hpp"
#include "ghostfd/term_structure.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghostfd::app {

/// Malformed or inconsistent configuration (exit status 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class GridKind { Uniform, BarrierOnNode };
enum class OutputFormat { Csv, Json };

struct GridConfig {
    GridKind kind = GridKind::Uniform;
    std::size_t steps = 100;
    std::optional<double> smax;  ///< default: default_smax(market, T); hint for on-node grids
};

struct ErrorCurveConfig {
    std::vector<std::size_t> steps;  ///< explicit list; overrides the sweep when non-empty
    std::size_t n_min = 100;
    std::size_t n_max = 6000;
    std::size_t points = 40;
    std::size_t dense_lo = 3000;
    std::size_t dense_hi = 3700;
    std::size_t dense_points = 15;
};

struct ProfileConfig {
    std::vector<std::size_t> snapshots{3, 4, 5, 6, 7, 8};
    std::size_t window = 8;
};

struct RunConfig {
    MarketParams market;
    ContractSpec contract;
    GridConfig grid;
    SchemeConfig scheme;
    std::vector<double> table1_smax{13662.0, 13702.0, 13760.0, 13772.0, 13778.0, 13782.0, 13784.0};
    ErrorCurveConfig error_curve;
    ProfileConfig profile;
    std::string output_path = "-";
    OutputFormat output_format = OutputFormat::Csv;
    bool emit_svg = false;
};

/// Flat "section.key" -> value map, the common currency of file, env and flag sources.
using KeyValues = std::map<std::string, std::string>;

/// Parses INI text ([section] headers, key = value lines, '#' or ';' comments).
[[nodiscard]] KeyValues parse_ini(const std::string& text);
[[nodiscard]] KeyValues load_ini_file(const std::string& path);

/// Collects GHOSTFD_<SECTION>_<KEY> variables from `environ`.
[[nodiscard]] KeyValues env_overrides(const char* const* environ_block, const std::string& prefix = "GHOSTFD_");

/// Builds a validated RunConfig; later maps override earlier ones.
[[nodiscard]] RunConfig build_config(const std::vector<KeyValues>& layers);

/// Defaults reproduce the one-touch experiment: S(0) = 6317.80, L+ = 7581.36, sigma = 20%, T = 1, M = 100.
[[nodiscard]] RunConfig default_config();

[[nodiscard]] SpatialGrid make_grid(const RunConfig& cfg);

}  // namespace ghostfd::app
