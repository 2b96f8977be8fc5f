#include "ghostfd/term_structure.hpp"

#include "ghostfd/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ghostfd {

TermStructure::TermStructure(double value) : values_{value} {
    if (!std::isfinite(value)) throw InvalidArgument("term structure value must be finite");
}

TermStructure::TermStructure(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.size() != breakpoints_.size() + 1)
        throw InvalidArgument("term structure needs exactly one more value than breakpoints");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i] > 0.0) || !std::isfinite(breakpoints_[i]))
            throw InvalidArgument("term structure breakpoints must be positive and finite");
        if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
            throw InvalidArgument("term structure breakpoints must be strictly increasing");
    }
    for (double v : values_)
        if (!std::isfinite(v)) throw InvalidArgument("term structure value must be finite");
}

double TermStructure::sample(double t) const {
    // upper_bound gives right-continuity: t == breakpoint selects the next interval.
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double TermStructure::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

void MarketParams::validate() const {
    if (!(spot > 0.0) || !std::isfinite(spot)) throw InvalidArgument("spot must be positive");
    if (!(vol.min_value() > 0.0)) throw InvalidArgument("volatility must be positive");
}

StepRates sample_rates(const MarketParams& market, double t) {
    return {market.rate.sample(t), market.dividend.sample(t), market.vol.sample(t)};
}

}  // namespace ghostfd
