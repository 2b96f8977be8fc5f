#include "ghostfd/stability.hpp"

#include "ghostfd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ghostfd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonnegative_rate(const StepRates& rates) {
    if (rates.rate < 0.0)
        throw AssumptionViolated("explicit stability bounds assume r >= 0, got r = " + std::to_string(rates.rate));
}

double reciprocal(double c) { return c > 0.0 ? 1.0 / c : kInf; }

}  // namespace

OffDiagonalCheck check_offdiag_nonneg(const SpatialGrid& grid, const MarketParams& market, double t) {
    const StepRates rates = sample_rates(market, t);
    const double drift = std::abs(rates.drift());
    const double var = rates.vol * rates.vol;

    OffDiagonalCheck out;
    out.max_admissible_spacing = kInf;
    for (std::size_t i = 1; i < grid.barrier_index(); ++i) {
        const double s = grid.node(i);
        if (drift > var * s / grid.spacing()) {
            out.holds = false;
            if (!out.first_violation) out.first_violation = i;
        }
        if (drift > 0.0) out.max_admissible_spacing = std::min(out.max_admissible_spacing, var * s / drift);
    }
    return out;
}

double dt_max_interior_at(double s, const SpatialGrid& grid, const StepRates& rates) {
    require_nonnegative_rate(rates);
    const double x = rates.vol * s / grid.spacing();
    return reciprocal(rates.rate + x * x);
}

double dt_max_interior(const SpatialGrid& grid, const MarketParams& market, double t, InteriorExtent extent) {
    const StepRates rates = sample_rates(market, t);
    require_nonnegative_rate(rates);
    const std::size_t last = extent == InteriorExtent::GridTop ? grid.steps() : grid.barrier_index() - 1;
    double best = kInf;
    for (std::size_t i = 1; i <= last; ++i) best = std::min(best, dt_max_interior_at(grid.node(i), grid, rates));
    return best;
}

GhostThreshold ghost_thresholds(const SpatialGrid& grid, const MarketParams& market, double t) {
    const StepRates rates = sample_rates(market, t);
    require_nonnegative_rate(rates);
    const double s = grid.node(grid.barrier_index() - 1);
    if (grid.on_node()) {
        const double dt = dt_max_interior_at(s, grid, rates);
        return {dt, dt};
    }
    const double x = s / grid.spacing();
    const double diffusion = 0.5 * rates.vol * rates.vol * x * x;
    const double convection = 0.5 * rates.drift() * x;
    const double upper = diffusion + convection;
    const double lower = diffusion - convection;
    const double c = rates.rate + 2.0 * diffusion + upper * grid.ghost_weight();

    GhostThreshold out;
    out.nonneg_diag = reciprocal(c);
    // Negative modified diagonal branch: dt c - 1 + dt l <= 1.
    out.norm = std::max(out.nonneg_diag, c + lower > 0.0 ? 2.0 / (c + lower) : kInf);
    return out;
}

double dt_max_ghost(const SpatialGrid& grid, const MarketParams& market, double t) {
    return ghost_thresholds(grid, market, t).norm;
}

double dt_max_ghost_asymptotic(const SpatialGrid& grid, const MarketParams& market, double t) {
    const StepRates rates = sample_rates(market, t);
    const double s = grid.node(grid.barrier_index() - 1);
    return 4.0 * grid.spacing() * grid.epsilon() / (rates.vol * rates.vol * s * s);
}

double norm_check(const TridiagonalOperator& op) {
    double best = 0.0;
    for (std::size_t i = 0; i < op.size(); ++i) {
        const double row = op.frozen[i] ? 1.0 : std::abs(1.0 + op.diag[i]) + std::abs(op.lower[i]) + std::abs(op.upper[i]);
        best = std::max(best, row);
    }
    return best;
}

std::size_t norm_argmax(const TridiagonalOperator& op) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < op.size(); ++i) {
        const double row = op.frozen[i] ? 1.0 : std::abs(1.0 + op.diag[i]) + std::abs(op.lower[i]) + std::abs(op.upper[i]);
        if (row > best) {
            best = row;
            arg = i;
        }
    }
    return arg;
}

double norm_at(const SpatialGrid& grid, const MarketParams& market, const ContractSpec& contract, double t,
               double dt) {
    return norm_check(assemble_interior(grid, sample_rates(market, t), dt, contract.rebate));
}

std::size_t steps_for(double maturity, double dt_max) {
    if (!(dt_max < kInf)) return 1;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(maturity / dt_max)));
}

StabilityReport analyze(const SpatialGrid& grid, const MarketParams& market, const ContractSpec& contract,
                        std::optional<double> t_opt) {
    const double t = t_opt.value_or(contract.maturity);
    const StepRates rates = sample_rates(market, t);
    StabilityReport rep;
    rep.dt_max_standard = dt_max_interior(grid, market, t, InteriorExtent::BelowBarrier);
    rep.dt_max_standard_top = dt_max_interior(grid, market, t, InteriorExtent::GridTop);
    const GhostThreshold ghost = ghost_thresholds(grid, market, t);
    rep.dt_max_ghost = ghost.norm;
    rep.dt_max_ghost_nonneg_diag = ghost.nonneg_diag;
    rep.dt_max_ghost_asymptotic = (rates.rate == 0.0 && rates.dividend == 0.0)
                                      ? dt_max_ghost_asymptotic(grid, market, t)
                                      : std::numeric_limits<double>::quiet_NaN();
    rep.n_min_standard = steps_for(contract.maturity, rep.dt_max_standard);
    rep.n_min_standard_top = steps_for(contract.maturity, rep.dt_max_standard_top);
    rep.n_min_ghost = steps_for(contract.maturity, rep.dt_max_ghost);
    rep.epsilon = grid.epsilon();
    rep.epsilon_ratio = grid.epsilon_ratio();
    rep.on_node = grid.on_node();
    rep.offdiag = check_offdiag_nonneg(grid, market, t);

    const std::size_t u = grid.barrier_index();
    rep.binding_row = u - 1;
    double tightest = rep.dt_max_ghost;
    for (std::size_t i = 1; i + 1 < u; ++i) {
        const double dt = dt_max_interior_at(grid.node(i), grid, rates);
        if (dt < tightest) {
            tightest = dt;
            rep.binding_row = i;
        }
    }
    return rep;
}

SpectralEstimate dominant_eigenvalue(const TridiagonalOperator& op, std::size_t iterations, double tolerance,
                                     unsigned long long seed) {
    if (iterations < 1) throw InvalidArgument("dominant_eigenvalue needs at least one iteration");
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < op.size(); ++i)
        if (!op.frozen[i]) active.push_back(i);
    SpectralEstimate out;
    if (active.empty()) return out;

    const std::size_t n = op.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(n, 0.0), y(n), z(n);
    for (std::size_t i : active) x[i] = dist(rng);

    auto multiply = [&](const std::vector<double>& in, std::vector<double>& res) {
        apply(op, in, res);
        for (std::size_t i = 0; i < n; ++i) res[i] = op.frozen[i] ? 0.0 : res[i] + in[i];
    };
    auto norm2 = [](const std::vector<double>& v) {
        double acc = 0.0;
        for (double e : v) acc += e * e;
        return std::sqrt(acc);
    };

    double nx = norm2(x);
    for (double& e : x) e /= nx;
    double previous = 0.0;
    // Two applications per iteration so that a dominant +/- pair does not make the ratio oscillate.
    for (std::size_t it = 1; it <= iterations; ++it) {
        multiply(x, y);
        multiply(y, z);
        const double nz = norm2(z);
        out.iterations = it;
        if (nz == 0.0) {
            out.magnitude = 0.0;
            out.converged = true;
            return out;
        }
        out.magnitude = std::sqrt(nz);
        for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / nz;
        if (it > 1 && std::abs(out.magnitude - previous) <= tolerance * out.magnitude) {
            out.converged = true;
            return out;
        }
        previous = out.magnitude;
    }
    return out;
}

namespace {

bool explicit_diverges(const MarketParams& market, const ContractSpec& contract, const SpatialGrid& grid,
                       std::size_t n, double bound) {
    SchemeConfig cfg;
    cfg.kind = SchemeKind::ExplicitEuler;
    cfg.steps = n;
    cfg.divergence_bound = bound;
    return solve(market, contract, grid, cfg).diverged;
}

}  // namespace

std::size_t empirical_threshold(const MarketParams& market, const ContractSpec& contract, const SpatialGrid& grid,
                                std::size_t n_lo, std::size_t n_hi, double divergence_bound) {
    if (n_lo < 1 || n_hi <= n_lo) throw BracketInvalid("empirical threshold needs 1 <= n_lo < n_hi");
    if (!explicit_diverges(market, contract, grid, n_lo, divergence_bound))
        throw BracketInvalid("explicit solve does not diverge at n_lo = " + std::to_string(n_lo));
    if (explicit_diverges(market, contract, grid, n_hi, divergence_bound))
        throw BracketInvalid("explicit solve diverges at n_hi = " + std::to_string(n_hi));
    while (n_hi - n_lo > 1) {
        const std::size_t mid = n_lo + (n_hi - n_lo) / 2;
        if (explicit_diverges(market, contract, grid, mid, divergence_bound))
            n_lo = mid;
        else
            n_hi = mid;
    }
    return n_hi;
}

std::size_t empirical_threshold(const MarketParams& market, const ContractSpec& contract, const SpatialGrid& grid,
                                double divergence_bound) {
    const StabilityReport rep = analyze(grid, market, contract);
    const std::size_t theory = std::max(rep.n_min_ghost, rep.n_min_standard);
    std::size_t hi = theory + 1;
    for (int guard = 0; explicit_diverges(market, contract, grid, hi, divergence_bound); ++guard) {
        if (guard > 8) throw BracketInvalid("no stable step count found up to " + std::to_string(hi));
        hi *= 2;
    }
    std::size_t lo = std::max<std::size_t>(1, hi / 2);
    for (int guard = 0; !explicit_diverges(market, contract, grid, lo, divergence_bound); ++guard) {
        if (lo == 1 || guard > 16) throw BracketInvalid("explicit solve never diverges below " + std::to_string(hi));
        hi = lo;
        lo = std::max<std::size_t>(1, lo / 2);
    }
    return empirical_threshold(market, contract, grid, lo, hi, divergence_bound);
}

}  // namespace ghostfd
