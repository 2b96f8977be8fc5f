#pragma once

namespace ghostfd {

/// Constant-parameter inputs for the closed-form upper one-touch.
struct AnalyticInputs {
    double spot = 0.0;
    double barrier = 0.0;
    double rate = 0.0;
    double dividend = 0.0;
    double vol = 0.0;
    double maturity = 0.0;
    double rebate = 1.0;
};

enum class RebatePayment {
    AtHit,       ///< paid at the first touch; matches V(L+, t) = rebate in the PDE
    AtMaturity,  ///< paid at T if touched
};

struct OneTouchPrice {
    double value = 0.0;
    bool touched = false;  ///< spot >= barrier: value is the undiscounted rebate
};

/// Standard normal CDF through erfc.
[[nodiscard]] double normal_cdf(double x);

/// Probability that ln S_t with drift nu and volatility vol reaches ln(barrier / spot) > 0 before T.
[[nodiscard]] double hit_probability(double log_distance, double nu, double vol, double maturity);

/// Reflection-principle price of an upper one-touch. Throws InvalidArgument on vol <= 0 or T <= 0.
[[nodiscard]] OneTouchPrice one_touch_price(const AnalyticInputs& in, RebatePayment payment = RebatePayment::AtHit);

}  // namespace ghostfd
