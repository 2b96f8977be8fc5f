#pragma once

#include "ghostfd/grid.hpp"
#include "ghostfd/term_structure.hpp"

#include <span>
#include <vector>

namespace ghostfd {

/// Per-step tridiagonal operator, already multiplied by the time step.
///
/// Row i represents (A V)_i = lower[i] V_{i-1} + diag[i] V_i + upper[i] V_{i+1},
/// plus source[i], which carries the ghost/Dirichlet data. Frozen rows hold
/// their value: all coefficients and the source are zero there.
struct TridiagonalOperator {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> source;
    std::vector<char> frozen;

    TridiagonalOperator() = default;
    explicit TridiagonalOperator(std::size_t n)
        : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), source(n, 0.0), frozen(n, 0) {}

    [[nodiscard]] std::size_t size() const noexcept { return diag.size(); }
};

struct RowCoefficients {
    double lower = 0.0;
    double diag = 0.0;
    double upper = 0.0;
};

/// Central-difference Black-Scholes row at node S_i.
[[nodiscard]] RowCoefficients interior_row(double s, double spacing, const StepRates& rates, double dt);

/// S = 0 row: linear payoff there, so only the reaction term -r V_0 survives.
[[nodiscard]] RowCoefficients lower_boundary_row(const SpatialGrid& grid, const StepRates& rates, double dt);

/// Raw A^k before ghost elimination: rows 1..u-1 central differences, row 0
/// the S = 0 boundary, rows >= u frozen. upper[u-1] still couples to the ghost node.
[[nodiscard]] TridiagonalOperator assemble_raw(const SpatialGrid& grid, const StepRates& rates, double dt);

/// Substitutes the linearly interpolated ghost value
///   V_u = dS / (L+ - S_{u-1}) * rebate - (S_u - L+) / (L+ - S_{u-1}) * V_{u-1}
/// into row u-1, moving the coupling into diag[u-1] and source[u-1].
[[nodiscard]] TridiagonalOperator eliminate_ghost(TridiagonalOperator op, const SpatialGrid& grid, double rebate);

/// assemble_raw followed by eliminate_ghost.
[[nodiscard]] TridiagonalOperator assemble_interior(const SpatialGrid& grid, const StepRates& rates, double dt,
                                                    double rebate = 1.0);

/// Operator for a step factor * dt (all entries are linear in dt).
[[nodiscard]] TridiagonalOperator scaled(const TridiagonalOperator& op, double factor);

/// out = A v (without identity or source). Frozen rows yield 0.
void apply(const TridiagonalOperator& op, std::span<const double> v, std::span<double> out);

/// Ghost value at S_u implied by V_{u-1}; equals the rebate on barrier-on-node grids.
[[nodiscard]] double ghost_value(const SpatialGrid& grid, double below_barrier, double rebate);

}  // namespace ghostfd
