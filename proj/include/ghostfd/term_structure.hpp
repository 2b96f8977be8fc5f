#pragma once

#include <vector>

namespace ghostfd {

/// Piecewise-constant function of time on [0, inf).
///
/// `values[j]` holds on [breakpoints[j-1], breakpoints[j]) with the first
/// interval starting at 0 and the last one extended flat to infinity.
class TermStructure {
public:
    /// Constant structure.
    explicit TermStructure(double value);
    TermStructure(std::vector<double> breakpoints, std::vector<double> values);

    /// Right-continuous sample at time t (years).
    [[nodiscard]] double sample(double t) const;

    [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] bool is_constant() const noexcept { return breakpoints_.empty(); }
    [[nodiscard]] double min_value() const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

inline double sample(const TermStructure& ts, double t) { return ts.sample(t); }

/// Market data for the time-dependent Black-Scholes model.
///
/// spot > 0 and vol > 0 are enforced. Negative rates are representable; the
/// stability formulas reject them with AssumptionViolated.
struct MarketParams {
    TermStructure rate{0.0};
    TermStructure dividend{0.0};
    TermStructure vol{0.2};
    double spot = 100.0;

    /// Throws InvalidArgument on spot <= 0 or any vol value <= 0.
    void validate() const;
};

/// Per-step samples r_k, q_k, sigma_k.
struct StepRates {
    double rate = 0.0;
    double dividend = 0.0;
    double vol = 0.0;

    [[nodiscard]] double drift() const noexcept { return rate - dividend; }
};

[[nodiscard]] StepRates sample_rates(const MarketParams& market, double t);

}  // namespace ghostfd
