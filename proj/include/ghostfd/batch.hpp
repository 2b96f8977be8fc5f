#pragma once

// Independent solves run concurrently with OpenMP; the serial path is the
// reference the parallel one is tested against.

#include "ghostfd/grid.hpp"
#include "ghostfd/schemes.hpp"
#include "ghostfd/term_structure.hpp"

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace ghostfd {

enum class Execution { Serial, Parallel };

/// Calls f(i) for i in [0, n). Exceptions are captured per index and the
/// first one (by index) is rethrown after the loop, so both paths fail identically.
template <typename F>
void for_each_index(std::size_t n, Execution exec, F&& f) {
    std::vector<std::exception_ptr> errors(n);
    if (exec == Execution::Parallel) {
        const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < count; ++i) {
            try {
                f(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct SolveJob {
    SpatialGrid grid;
    SchemeConfig scheme;
};

[[nodiscard]] std::vector<SolveResult> solve_batch(const MarketParams& market, const ContractSpec& contract,
                                                   std::span<const SolveJob> jobs, Execution exec);

/// Explicit-scheme divergence flag for each step count.
[[nodiscard]] std::vector<char> divergence_scan(const MarketParams& market, const ContractSpec& contract,
                                                const SpatialGrid& grid, std::span<const std::size_t> steps,
                                                double divergence_bound, Execution exec);

/// Multisection variant of empirical_threshold: each round probes `fanout - 1`
/// step counts concurrently. Same contract and result as the bisection.
[[nodiscard]] std::size_t empirical_threshold_parallel(const MarketParams& market, const ContractSpec& contract,
                                                       const SpatialGrid& grid, std::size_t n_lo, std::size_t n_hi,
                                                       double divergence_bound = 10.0, std::size_t fanout = 8);

[[nodiscard]] int max_threads();

}  // namespace ghostfd
