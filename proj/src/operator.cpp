#include "ghostfd/operator.hpp"

#include "ghostfd/errors.hpp"

#include <cassert>

namespace ghostfd {

RowCoefficients interior_row(double s, double spacing, const StepRates& rates, double dt) {
    const double diffusion = rates.vol * rates.vol * s * s / (2.0 * spacing * spacing);
    const double convection = rates.drift() * s / (2.0 * spacing);
    return {dt * (diffusion - convection), dt * (-rates.rate - 2.0 * diffusion), dt * (diffusion + convection)};
}

RowCoefficients lower_boundary_row(const SpatialGrid& grid, const StepRates& rates, double dt) {
    // One-sided drift term (r - q) S_0 (V_1 - V_0) / dS vanishes identically at S_0 = 0.
    const double drift = rates.drift() * grid.node(0) / grid.spacing();
    return {0.0, dt * (-rates.rate - drift), dt * drift};
}

TridiagonalOperator assemble_raw(const SpatialGrid& grid, const StepRates& rates, double dt) {
    const std::size_t n = grid.size();
    const std::size_t u = grid.barrier_index();
    TridiagonalOperator op(n);

    const RowCoefficients first = lower_boundary_row(grid, rates, dt);
    op.diag[0] = first.diag;
    op.upper[0] = first.upper;

    for (std::size_t i = 1; i < u; ++i) {
        const RowCoefficients row = interior_row(grid.node(i), grid.spacing(), rates, dt);
        op.lower[i] = row.lower;
        op.diag[i] = row.diag;
        op.upper[i] = row.upper;
    }
    for (std::size_t i = u; i < n; ++i) op.frozen[i] = 1;
    return op;
}

TridiagonalOperator eliminate_ghost(TridiagonalOperator op, const SpatialGrid& grid, double rebate) {
    const std::size_t row = grid.barrier_index() - 1;
    const double coupling = op.upper[row];
    op.diag[row] -= coupling * grid.ghost_weight();
    op.source[row] += coupling * grid.ghost_rebate_weight() * rebate;
    op.upper[row] = 0.0;
    return op;
}

TridiagonalOperator assemble_interior(const SpatialGrid& grid, const StepRates& rates, double dt, double rebate) {
    return eliminate_ghost(assemble_raw(grid, rates, dt), grid, rebate);
}

TridiagonalOperator scaled(const TridiagonalOperator& op, double factor) {
    TridiagonalOperator out = op;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.lower[i] *= factor;
        out.diag[i] *= factor;
        out.upper[i] *= factor;
        out.source[i] *= factor;
    }
    return out;
}

void apply(const TridiagonalOperator& op, std::span<const double> v, std::span<double> out) {
    const std::size_t n = op.size();
    if (v.size() != n || out.size() != n) throw InvalidArgument("apply: size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (op.frozen[i]) {
            out[i] = 0.0;
            continue;
        }
        double acc = op.diag[i] * v[i];
        if (i > 0) acc += op.lower[i] * v[i - 1];
        if (i + 1 < n) acc += op.upper[i] * v[i + 1];
        out[i] = acc;
    }
}

double ghost_value(const SpatialGrid& grid, double below_barrier, double rebate) {
    return grid.ghost_rebate_weight() * rebate - grid.ghost_weight() * below_barrier;
}

}  // namespace ghostfd
