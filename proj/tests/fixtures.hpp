#pragma once

#include "ghostfd/grid.hpp"
#include "ghostfd/term_structure.hpp"

#include <algorithm>
#include <cmath>

namespace ghostfd::testing {

inline constexpr double kSpot = 6317.80;
inline constexpr double kBarrier = 7581.36;
inline constexpr double kVol = 0.20;
inline constexpr double kReferencePrice = 0.329620;

inline MarketParams reference_market(double rate = 0.0, double dividend = 0.0, double vol = kVol) {
    MarketParams m;
    m.spot = kSpot;
    m.rate = TermStructure(rate);
    m.dividend = TermStructure(dividend);
    m.vol = TermStructure(vol);
    return m;
}

inline ContractSpec reference_contract() { return {kBarrier, 1.0, 1.0}; }

inline constexpr double kTable1Smax[] = {13662.0, 13702.0, 13760.0, 13772.0, 13778.0, 13782.0, 13784.0};

inline bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace ghostfd::testing
