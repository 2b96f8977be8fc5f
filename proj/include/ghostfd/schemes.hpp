#pragma once

#include "ghostfd/grid.hpp"
#include "ghostfd/operator.hpp"
#include "ghostfd/term_structure.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ghostfd {

enum class SchemeKind { ExplicitEuler, CrankNicolson, TRBDF2 };

[[nodiscard]] std::string_view to_string(SchemeKind kind) noexcept;
/// Accepts "explicit", "cn"/"crank-nicolson", "trbdf2"/"tr-bdf2". Throws InvalidArgument otherwise.
[[nodiscard]] SchemeKind parse_scheme(std::string_view name);

inline const double kTrBdf2Alpha = 2.0 - std::sqrt(2.0);

struct SchemeConfig {
    SchemeKind kind = SchemeKind::ExplicitEuler;
    std::size_t steps = 100;        ///< N, dt = T / N
    double divergence_bound = 10.0; ///< B, in multiples of the rebate
    double alpha = kTrBdf2Alpha;    ///< TR-BDF2 split
    std::vector<std::size_t> snapshot_steps;  ///< step indices k (after k steps) to retain

    void validate() const;
};

struct Snapshot {
    std::size_t step = 0;  ///< k
    double time = 0.0;     ///< physical time T - k dt
    std::vector<double> values;
};

struct SolveResult {
    SchemeKind kind = SchemeKind::ExplicitEuler;
    std::size_t steps = 0;
    std::size_t steps_taken = 0;
    double rebate = 1.0;
    std::vector<double> final_values;
    std::vector<Snapshot> snapshots;
    bool diverged = false;
    std::optional<std::size_t> diverged_at_step;
};

/// V(S, T) = rebate for S >= L+, 0 below.
[[nodiscard]] std::vector<double> initial_condition(const SpatialGrid& grid, double rebate);

/// V + A V + source, with frozen rows carried unchanged.
void step_explicit(std::span<const double> values, const TridiagonalOperator& op, std::span<double> out);
[[nodiscard]] std::vector<double> step_explicit(std::span<const double> values, const TridiagonalOperator& op);

/// Solves (I - theta A_new) V' = (I + (1 - theta) A_old) V + theta s_new + (1 - theta) s_old.
/// Frozen rows of op_new become identity equations.
[[nodiscard]] std::vector<double> step_theta(std::span<const double> values, const TridiagonalOperator& op_new,
                                             const TridiagonalOperator& op_old, double theta);

/// One TR-BDF2 step: trapezoidal stage over alpha dt then BDF2 over the rest.
/// The three operators are assembled for the full dt at the start, the
/// intermediate point and the end of the step.
[[nodiscard]] std::vector<double> step_trbdf2(std::span<const double> values, const TridiagonalOperator& op_start,
                                              const TridiagonalOperator& op_mid, const TridiagonalOperator& op_end,
                                              double alpha = kTrBdf2Alpha);

/// Marches k = 0..N-1 backwards from maturity, rebuilding the operator at
/// t_k = T - k dt each step. Stops at the first step where a value is
/// non-finite or exceeds divergence_bound * |rebate| in magnitude.
[[nodiscard]] SolveResult solve(const MarketParams& market, const ContractSpec& contract, const SpatialGrid& grid,
                                const SchemeConfig& scheme);

/// Piecewise-linear read of the final slice. Between S_{u-1} and the barrier
/// the segment ends at (L+, rebate); nodes beyond are at the rebate.
[[nodiscard]] double read_price(const SolveResult& result, const SpatialGrid& grid, double s);
[[nodiscard]] double read_price(std::span<const double> values, const SpatialGrid& grid, double rebate, double s);

}  // namespace ghostfd
