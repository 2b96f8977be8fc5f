#pragma once

#include <span>
#include <vector>

namespace ghostfd {

/// Pivot magnitude below which the elimination is declared singular.
inline constexpr double kPivotFloor = 1e-300;

/// Thomas algorithm (no pivoting) for
///   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
///
/// lower[0] and upper[n-1] are ignored. Throws SingularSystem when a pivot
/// magnitude drops below kPivotFloor.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<const double> rhs, std::span<double> x, std::vector<double>& scratch);

[[nodiscard]] std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                                    std::span<const double> upper, std::span<const double> rhs);

}  // namespace ghostfd
