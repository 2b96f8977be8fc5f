#pragma once

#include "ghostfd/grid.hpp"
#include "ghostfd/operator.hpp"
#include "ghostfd/schemes.hpp"
#include "ghostfd/term_structure.hpp"

#include <cstddef>
#include <optional>

namespace ghostfd {

/// Result of the off-diagonal sign check |r - q| <= sigma^2 S_i / dS.
struct OffDiagonalCheck {
    bool holds = true;
    std::optional<std::size_t> first_violation;  ///< smallest offending row
    double max_admissible_spacing = 0.0;         ///< largest dS for which every row 1..u-1 passes
};

/// Checks non-negativity of the off-diagonal entries on rows 1..u-1.
[[nodiscard]] OffDiagonalCheck check_offdiag_nonneg(const SpatialGrid& grid, const MarketParams& market, double t);

/// Which rows enter the interior explicit-step bound dt (r + sigma^2 S_i^2 / dS^2) <= 1.
enum class InteriorExtent {
    GridTop,       ///< all nodes up to S_M
    BelowBarrier,  ///< PDE rows only, i.e. nodes up to S_{u-1} < L+
};

/// min over the selected rows of 1 / (r + sigma^2 S_i^2 / dS^2). Throws AssumptionViolated if r < 0.
[[nodiscard]] double dt_max_interior(const SpatialGrid& grid, const MarketParams& market, double t,
                                     InteriorExtent extent = InteriorExtent::BelowBarrier);

/// Same bound at a single node S.
[[nodiscard]] double dt_max_interior_at(double s, const SpatialGrid& grid, const StepRates& rates);

/// Row u-1 thresholds after ghost elimination.
///
/// With c = r + sigma^2 S^2 / dS^2 + (sigma^2 S^2 / (2 dS^2) + (r - q) S / (2 dS)) (S_u - L+) / (L+ - S_{u-1})
/// and l = sigma^2 S^2 / (2 dS^2) - (r - q) S / (2 dS) at S = S_{u-1}:
///   nonneg_diag:  dt c <= 1 keeps the modified diagonal of I + A non-negative;
///   norm:         largest dt with |1 - dt c| + dt l <= 1, i.e. max(1/c, 2/(c + l)).
/// For r = q = 0 the norm bound is 4 dS^2 / (sigma^2 S^2 (3 + (S_u - L+)/(L+ - S_{u-1}))).
struct GhostThreshold {
    double nonneg_diag = 0.0;
    double norm = 0.0;
};

[[nodiscard]] GhostThreshold ghost_thresholds(const SpatialGrid& grid, const MarketParams& market, double t);

/// Largest dt for which row u-1 of I + A satisfies the infinity-norm bound.
/// On barrier-on-node grids this is the interior bound at S_{u-1}.
[[nodiscard]] double dt_max_ghost(const SpatialGrid& grid, const MarketParams& market, double t);

/// Leading term 4 dS eps / (sigma^2 S_{u-1}^2) of the zero-rate ghost bound as eps -> 0.
[[nodiscard]] double dt_max_ghost_asymptotic(const SpatialGrid& grid, const MarketParams& market, double t);

/// ||I + A||_inf over all rows; frozen rows contribute exactly 1.
[[nodiscard]] double norm_check(const TridiagonalOperator& op);

/// Row index attaining norm_check.
[[nodiscard]] std::size_t norm_argmax(const TridiagonalOperator& op);

/// norm_check of the ghost-eliminated operator for step dt at time t.
[[nodiscard]] double norm_at(const SpatialGrid& grid, const MarketParams& market, const ContractSpec& contract,
                             double t, double dt);

/// Smallest step count N with maturity / N <= dt_max.
[[nodiscard]] std::size_t steps_for(double maturity, double dt_max);

struct StabilityReport {
    double dt_max_standard = 0.0;          ///< interior bound over PDE rows (S <= S_{u-1})
    double dt_max_standard_top = 0.0;      ///< interior bound evaluated up to S_M
    double dt_max_ghost = 0.0;             ///< row u-1 norm bound
    double dt_max_ghost_nonneg_diag = 0.0; ///< row u-1 non-negative diagonal bound
    double dt_max_ghost_asymptotic = 0.0;  ///< zero-rate O(eps) term, NaN when r or q is non-zero
    std::size_t n_min_standard = 0;
    std::size_t n_min_standard_top = 0;
    std::size_t n_min_ghost = 0;
    std::size_t binding_row = 0;           ///< row of the tightest bound among rows 1..u-1
    double epsilon = 0.0;
    double epsilon_ratio = 0.0;
    bool on_node = false;
    OffDiagonalCheck offdiag;
};

/// Closed-form thresholds with coefficients sampled at t (default t = maturity).
[[nodiscard]] StabilityReport analyze(const SpatialGrid& grid, const MarketParams& market,
                                      const ContractSpec& contract, std::optional<double> t = std::nullopt);

struct SpectralEstimate {
    double magnitude = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Power-iteration estimate of the spectral radius of I + A on the non-frozen rows.
/// Stops when successive estimates agree to `tolerance` (relative) or after `iterations`.
[[nodiscard]] SpectralEstimate dominant_eigenvalue(const TridiagonalOperator& op, std::size_t iterations = 500,
                                                   double tolerance = 1e-6, unsigned long long seed = 12345);

/// Smallest N in (n_lo, n_hi] for which the explicit solve does not diverge.
/// Requires divergence at n_lo and none at n_hi, else BracketInvalid.
[[nodiscard]] std::size_t empirical_threshold(const MarketParams& market, const ContractSpec& contract,
                                              const SpatialGrid& grid, std::size_t n_lo, std::size_t n_hi,
                                              double divergence_bound = 10.0);

/// Empirical threshold with a bracket derived from the closed-form ghost bound.
[[nodiscard]] std::size_t empirical_threshold(const MarketParams& market, const ContractSpec& contract,
                                              const SpatialGrid& grid, double divergence_bound = 10.0);

}  // namespace ghostfd
