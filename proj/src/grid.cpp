#include "ghostfd/grid.hpp"

#include "ghostfd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ghostfd {

void ContractSpec::validate() const {
    if (!(barrier > 0.0) || !std::isfinite(barrier)) throw InvalidArgument("barrier must be positive");
    if (!(maturity > 0.0) || !std::isfinite(maturity)) throw InvalidArgument("maturity must be positive");
    if (!std::isfinite(rebate)) throw InvalidArgument("rebate must be finite");
}

SpatialGrid::SpatialGrid(double spacing, std::size_t steps, double barrier)
    : spacing_(spacing), barrier_(barrier) {
    if (steps < 3) throw InvalidArgument("grid needs at least 3 space steps");
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InvalidArgument("grid spacing must be positive");
    if (!(barrier > 0.0)) throw InvalidArgument("barrier must be positive");

    nodes_.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) nodes_[i] = static_cast<double>(i) * spacing;

    const double threshold = barrier * (1.0 - kNodeTolerance);
    const auto it = std::find_if(nodes_.begin(), nodes_.end(), [&](double s) { return s >= threshold; });
    if (it == nodes_.end()) {
        barrier_index_ = steps;
        beyond_grid_ = true;
    } else {
        barrier_index_ = static_cast<std::size_t>(it - nodes_.begin());
    }
    if (barrier_index_ <= 1)
        throw BarrierBelowFirstCell("barrier " + std::to_string(barrier) +
                                    " is not above the first grid cell S_1 = " + std::to_string(nodes_[1]));

    on_node_ = !beyond_grid_ && std::abs(nodes_[barrier_index_] - barrier) <= kNodeTolerance * barrier;
    epsilon_ = on_node_ ? spacing_ : barrier - nodes_[barrier_index_ - 1];
}

double SpatialGrid::ghost_weight() const noexcept {
    if (on_node_) return 0.0;
    return (nodes_[barrier_index_] - barrier_) / epsilon_;
}

double SpatialGrid::ghost_rebate_weight() const noexcept {
    if (on_node_) return 1.0;
    return spacing_ / epsilon_;
}

double default_smax(const MarketParams& market, double maturity) {
    const StepRates at_t = sample_rates(market, maturity);
    const double sigma = at_t.vol;
    return market.spot * std::exp((at_t.rate - at_t.dividend - 0.5 * sigma * sigma) * maturity +
                                  4.0 * sigma * std::sqrt(maturity));
}

SpatialGrid build_uniform(double smax, std::size_t steps, double barrier) {
    if (!(smax > 0.0) || steps == 0) throw InvalidArgument("grid needs smax > 0 and M > 0");
    if (barrier <= smax / static_cast<double>(steps))
        throw BarrierBelowFirstCell("barrier is not above the first grid cell");
    return SpatialGrid(smax / static_cast<double>(steps), steps, barrier);
}

SpatialGrid build_barrier_on_node(double smax_hint, std::size_t steps, double barrier) {
    if (steps < 3) throw InvalidArgument("grid needs at least 3 space steps");
    if (!(barrier < smax_hint)) throw InvalidArgument("barrier-on-node grid needs barrier < smax_hint");
    const double target = std::round(barrier * static_cast<double>(steps) / smax_hint);
    const auto u = std::clamp<std::size_t>(static_cast<std::size_t>(target), 2, steps - 1);
    return SpatialGrid(barrier / static_cast<double>(u), steps, barrier);
}

}  // namespace ghostfd
