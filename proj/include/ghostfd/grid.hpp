#pragma once

#include "ghostfd/term_structure.hpp"

#include <cstddef>
#include <vector>

namespace ghostfd {

/// Pay-at-hit upper one-touch.
struct ContractSpec {
    double barrier = 0.0;   ///< L+
    double maturity = 1.0;  ///< T in years
    double rebate = 1.0;

    void validate() const;
};

/// Uniform grid S_i = i * dS on [0, S_M] with the barrier located relative to it.
///
/// barrier_index u satisfies S_{u-1} < L+ <= S_u and epsilon = L+ - S_{u-1}.
/// When the barrier lies beyond S_M the grid is truncated: u = M and
/// epsilon exceeds dS (beyond_grid() is then true).
class SpatialGrid {
public:
    /// Relative tolerance used to classify L+ as coinciding with a node.
    static constexpr double kNodeTolerance = 1e-12;

    SpatialGrid(double spacing, std::size_t steps, double barrier);

    [[nodiscard]] std::size_t steps() const noexcept { return nodes_.size() - 1; }  ///< M
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }       ///< M + 1
    [[nodiscard]] double spacing() const noexcept { return spacing_; }
    [[nodiscard]] double node(std::size_t i) const { return nodes_[i]; }
    [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] double smax() const noexcept { return nodes_.back(); }

    [[nodiscard]] double barrier() const noexcept { return barrier_; }
    [[nodiscard]] std::size_t barrier_index() const noexcept { return barrier_index_; }
    [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
    [[nodiscard]] double epsilon_ratio() const noexcept { return epsilon_ / spacing_; }
    [[nodiscard]] bool on_node() const noexcept { return on_node_; }
    [[nodiscard]] bool beyond_grid() const noexcept { return beyond_grid_; }

    /// (S_u - L+) / (L+ - S_{u-1}): weight of V_{u-1} in the linear ghost value.
    [[nodiscard]] double ghost_weight() const noexcept;
    /// dS / (L+ - S_{u-1}): weight of the rebate in the linear ghost value.
    [[nodiscard]] double ghost_rebate_weight() const noexcept;

private:
    std::vector<double> nodes_;
    double spacing_;
    double barrier_;
    std::size_t barrier_index_ = 0;
    double epsilon_ = 0.0;
    bool on_node_ = false;
    bool beyond_grid_ = false;
};

/// S_max = S(0) exp((r(T) - q(T) - sigma(T)^2 / 2) T + 4 sigma(T) sqrt(T)).
[[nodiscard]] double default_smax(const MarketParams& market, double maturity);

/// Uniform grid with dS = smax / M. Throws BarrierBelowFirstCell if L+ <= S_1.
[[nodiscard]] SpatialGrid build_uniform(double smax, std::size_t steps, double barrier);

/// Uniform grid rescaled so that L+ is node u = round(L+ M / smax_hint), u clamped to [2, M-1].
[[nodiscard]] SpatialGrid build_barrier_on_node(double smax_hint, std::size_t steps, double barrier);

}  // namespace ghostfd
