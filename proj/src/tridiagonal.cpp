#include "ghostfd/tridiagonal.hpp"

#include "ghostfd/errors.hpp"

#include <cmath>
#include <string>

namespace ghostfd {

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<const double> rhs, std::span<double> x, std::vector<double>& scratch) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n || x.size() != n)
        throw InvalidArgument("solve_tridiagonal: size mismatch");
    if (n == 0) return;
    scratch.resize(n);

    auto check = [](double pivot, std::size_t row) {
        if (!(std::abs(pivot) >= kPivotFloor))
            throw SingularSystem("tridiagonal pivot below floor at row " + std::to_string(row), row);
    };

    // Forward sweep: scratch holds the modified super-diagonal, x the modified rhs.
    double pivot = diag[0];
    check(pivot, 0);
    scratch[0] = upper[0] / pivot;
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i] * scratch[i - 1];
        check(pivot, i);
        scratch[i] = (i + 1 < n) ? upper[i] / pivot : 0.0;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch[i] * x[i + 1];
}

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
    std::vector<double> x(diag.size());
    std::vector<double> scratch;
    solve_tridiagonal(lower, diag, upper, rhs, x, scratch);
    return x;
}

}  // namespace ghostfd
