#include "ghostfd/analytic.hpp"

#include "ghostfd/errors.hpp"

#include <cmath>

namespace ghostfd {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double hit_probability(double log_distance, double nu, double vol, double maturity) {
    const double sd = vol * std::sqrt(maturity);
    const double b = log_distance;
    return normal_cdf((-b + nu * maturity) / sd) +
           std::exp(2.0 * nu * b / (vol * vol)) * normal_cdf((-b - nu * maturity) / sd);
}

OneTouchPrice one_touch_price(const AnalyticInputs& in, RebatePayment payment) {
    if (!(in.vol > 0.0)) throw InvalidArgument("one-touch price needs vol > 0");
    if (!(in.maturity > 0.0)) throw InvalidArgument("one-touch price needs maturity > 0");
    if (!(in.spot > 0.0) || !(in.barrier > 0.0)) throw InvalidArgument("one-touch price needs positive prices");
    if (in.spot >= in.barrier) return {in.rebate, true};

    const double sd = in.vol * std::sqrt(in.maturity);
    const double var = in.vol * in.vol;
    const double log_distance = std::log(in.barrier / in.spot);

    if (payment == RebatePayment::AtMaturity) {
        const double nu = in.rate - in.dividend - 0.5 * var;
        return {in.rebate * std::exp(-in.rate * in.maturity) * hit_probability(log_distance, nu, in.vol, in.maturity),
                false};
    }

    // Laplace transform of the first-passage time at the discount rate r.
    const double mu = (in.rate - in.dividend - 0.5 * var) / var;
    const double lambda = std::sqrt(mu * mu + 2.0 * in.rate / var);
    const double z = log_distance / sd + lambda * sd;
    const double ratio = in.barrier / in.spot;
    const double value = std::pow(ratio, mu + lambda) * normal_cdf(-z) +
                         std::pow(ratio, mu - lambda) * normal_cdf(-z + 2.0 * lambda * sd);
    return {in.rebate * value, false};
}

}  // namespace ghostfd
