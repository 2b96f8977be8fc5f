#include "ghostfd/schemes.hpp"

#include "ghostfd/errors.hpp"
#include "ghostfd/tridiagonal.hpp"

#include <algorithm>
#include <cmath>

namespace ghostfd {

std::string_view to_string(SchemeKind kind) noexcept {
    switch (kind) {
        case SchemeKind::ExplicitEuler: return "explicit";
        case SchemeKind::CrankNicolson: return "crank-nicolson";
        case SchemeKind::TRBDF2: return "tr-bdf2";
    }
    return "unknown";
}

SchemeKind parse_scheme(std::string_view name) {
    if (name == "explicit" || name == "euler" || name == "explicit-euler") return SchemeKind::ExplicitEuler;
    if (name == "cn" || name == "crank-nicolson" || name == "cranknicolson") return SchemeKind::CrankNicolson;
    if (name == "trbdf2" || name == "tr-bdf2") return SchemeKind::TRBDF2;
    throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

void SchemeConfig::validate() const {
    if (steps < 1) throw InvalidArgument("scheme needs at least one time step");
    if (!(divergence_bound > 1.0)) throw InvalidArgument("divergence bound must exceed 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("TR-BDF2 alpha must lie in (0, 1)");
}

std::vector<double> initial_condition(const SpatialGrid& grid, double rebate) {
    std::vector<double> v(grid.size(), 0.0);
    const double threshold = grid.barrier() * (1.0 - SpatialGrid::kNodeTolerance);
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid.node(i) >= threshold) v[i] = rebate;
    return v;
}

void step_explicit(std::span<const double> values, const TridiagonalOperator& op, std::span<double> out) {
    const std::size_t n = op.size();
    if (values.size() != n || out.size() != n) throw InvalidArgument("step_explicit: size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (op.frozen[i]) {
            out[i] = values[i];
            continue;
        }
        double acc = values[i] + op.diag[i] * values[i] + op.source[i];
        if (i > 0) acc += op.lower[i] * values[i - 1];
        if (i + 1 < n) acc += op.upper[i] * values[i + 1];
        out[i] = acc;
    }
}

std::vector<double> step_explicit(std::span<const double> values, const TridiagonalOperator& op) {
    std::vector<double> out(values.size());
    step_explicit(values, op, out);
    return out;
}

namespace {

// Implicit solve (I - c A) x = rhs with identity rows where A is frozen.
struct ImplicitSystem {
    std::vector<double> lower, diag, upper, scratch;

    void solve(const TridiagonalOperator& op, double c, std::span<const double> rhs, std::span<double> x) {
        const std::size_t n = op.size();
        lower.resize(n);
        diag.resize(n);
        upper.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (op.frozen[i]) {
                lower[i] = 0.0;
                diag[i] = 1.0;
                upper[i] = 0.0;
            } else {
                lower[i] = -c * op.lower[i];
                diag[i] = 1.0 - c * op.diag[i];
                upper[i] = -c * op.upper[i];
            }
        }
        solve_tridiagonal(lower, diag, upper, rhs, x, scratch);
    }
};

class Stepper {
public:
    explicit Stepper(std::size_t n) : rhs_(n), work_(n), stage_(n) {}

    void theta(std::span<const double> v, const TridiagonalOperator& op_new, const TridiagonalOperator& op_old,
               double theta_weight, std::span<double> out) {
        const std::size_t n = v.size();
        apply(op_old, v, work_);
        for (std::size_t i = 0; i < n; ++i) {
            rhs_[i] = op_new.frozen[i] ? v[i]
                                       : v[i] + (1.0 - theta_weight) * (work_[i] + op_old.source[i]) +
                                             theta_weight * op_new.source[i];
        }
        system_.solve(op_new, theta_weight, rhs_, out);
    }

    void trbdf2(std::span<const double> v, const TridiagonalOperator& op_start, const TridiagonalOperator& op_mid,
                const TridiagonalOperator& op_end, double alpha, std::span<double> out) {
        const std::size_t n = v.size();
        // Trapezoidal stage over alpha dt: operators scale linearly in the step.
        apply(op_start, v, work_);
        for (std::size_t i = 0; i < n; ++i) {
            rhs_[i] = op_mid.frozen[i]
                          ? v[i]
                          : v[i] + 0.5 * alpha * (work_[i] + op_start.source[i] + op_mid.source[i]);
        }
        system_.solve(op_mid, 0.5 * alpha, rhs_, stage_);

        // BDF2 stage: (I - g dt A) V1 = (V_mid - (1-alpha)^2 V0) / (alpha (2 - alpha)) + g dt s.
        const double g = (1.0 - alpha) / (2.0 - alpha);
        const double w_mid = 1.0 / (alpha * (2.0 - alpha));
        const double w_old = (1.0 - alpha) * (1.0 - alpha) / (alpha * (2.0 - alpha));
        for (std::size_t i = 0; i < n; ++i) {
            rhs_[i] = op_end.frozen[i] ? v[i] : w_mid * stage_[i] - w_old * v[i] + g * op_end.source[i];
        }
        system_.solve(op_end, g, rhs_, out);
    }

private:
    std::vector<double> rhs_, work_, stage_;
    ImplicitSystem system_;
};

void check_theta(double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgument("theta must lie in [0, 1]");
}

}  // namespace

std::vector<double> step_theta(std::span<const double> values, const TridiagonalOperator& op_new,
                               const TridiagonalOperator& op_old, double theta) {
    check_theta(theta);
    if (values.size() != op_new.size() || values.size() != op_old.size())
        throw InvalidArgument("step_theta: size mismatch");
    std::vector<double> out(values.size());
    Stepper(values.size()).theta(values, op_new, op_old, theta, out);
    return out;
}

std::vector<double> step_trbdf2(std::span<const double> values, const TridiagonalOperator& op_start,
                                const TridiagonalOperator& op_mid, const TridiagonalOperator& op_end, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("TR-BDF2 alpha must lie in (0, 1)");
    if (values.size() != op_start.size() || values.size() != op_mid.size() || values.size() != op_end.size())
        throw InvalidArgument("step_trbdf2: size mismatch");
    std::vector<double> out(values.size());
    Stepper(values.size()).trbdf2(values, op_start, op_mid, op_end, alpha, out);
    return out;
}

SolveResult solve(const MarketParams& market, const ContractSpec& contract, const SpatialGrid& grid,
                  const SchemeConfig& scheme) {
    market.validate();
    contract.validate();
    scheme.validate();

    SolveResult result;
    result.kind = scheme.kind;
    result.steps = scheme.steps;
    result.rebate = contract.rebate;

    const double maturity = contract.maturity;
    const double dt = maturity / static_cast<double>(scheme.steps);
    const double bound = scheme.divergence_bound * std::abs(contract.rebate);

    std::vector<double> v = initial_condition(grid, contract.rebate);
    std::vector<double> next(v.size());
    Stepper stepper(v.size());

    std::vector<std::size_t> wanted = scheme.snapshot_steps;
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
    auto want = wanted.begin();
    auto record = [&](std::size_t k) {
        while (want != wanted.end() && *want < k) ++want;
        if (want != wanted.end() && *want == k) {
            result.snapshots.push_back({k, maturity - static_cast<double>(k) * dt, v});
            ++want;
        }
    };
    record(0);

    for (std::size_t k = 0; k < scheme.steps; ++k) {
        const double t = maturity - static_cast<double>(k) * dt;
        const TridiagonalOperator op = assemble_interior(grid, sample_rates(market, t), dt, contract.rebate);
        switch (scheme.kind) {
            case SchemeKind::ExplicitEuler: step_explicit(v, op, next); break;
            case SchemeKind::CrankNicolson: stepper.theta(v, op, op, 0.5, next); break;
            case SchemeKind::TRBDF2: stepper.trbdf2(v, op, op, op, scheme.alpha, next); break;
        }
        v.swap(next);
        result.steps_taken = k + 1;

        const bool blown = std::any_of(v.begin(), v.end(), [&](double x) { return !std::isfinite(x) || std::abs(x) > bound; });
        record(k + 1);
        if (blown) {
            result.diverged = true;
            result.diverged_at_step = k + 1;
            break;
        }
    }
    result.final_values = std::move(v);
    return result;
}

double read_price(std::span<const double> values, const SpatialGrid& grid, double rebate, double s) {
    if (values.size() != grid.size()) throw InvalidArgument("read_price: size mismatch");
    if (!(s >= grid.node(0) && s <= grid.smax()))
        throw OutOfDomain("price point " + std::to_string(s) + " outside the grid");

    const std::size_t u = grid.barrier_index();
    const double below = grid.node(u - 1);
    if (s >= below && (grid.beyond_grid() || s < grid.barrier())) {
        const double w = (s - below) / (grid.barrier() - below);
        return (1.0 - w) * values[u - 1] + w * rebate;
    }
    if (s >= grid.barrier()) return rebate;

    const double x = s / grid.spacing();
    auto i = static_cast<std::size_t>(std::floor(x));
    i = std::min(i, grid.steps() - 1);
    const double w = (s - grid.node(i)) / grid.spacing();
    return (1.0 - w) * values[i] + w * values[i + 1];
}

double read_price(const SolveResult& result, const SpatialGrid& grid, double s) {
    return read_price(result.final_values, grid, result.rebate, s);
}

}  // namespace ghostfd
