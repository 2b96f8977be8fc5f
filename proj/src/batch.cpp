#include "ghostfd/batch.hpp"

#include "ghostfd/errors.hpp"

#include <algorithm>
#include <omp.h>

namespace ghostfd {

std::vector<SolveResult> solve_batch(const MarketParams& market, const ContractSpec& contract,
                                     std::span<const SolveJob> jobs, Execution exec) {
    std::vector<SolveResult> out(jobs.size());
    for_each_index(jobs.size(), exec,
                   [&](std::size_t i) { out[i] = solve(market, contract, jobs[i].grid, jobs[i].scheme); });
    return out;
}

std::vector<char> divergence_scan(const MarketParams& market, const ContractSpec& contract, const SpatialGrid& grid,
                                  std::span<const std::size_t> steps, double divergence_bound, Execution exec) {
    std::vector<char> out(steps.size(), 0);
    for_each_index(steps.size(), exec, [&](std::size_t i) {
        SchemeConfig cfg;
        cfg.kind = SchemeKind::ExplicitEuler;
        cfg.steps = steps[i];
        cfg.divergence_bound = divergence_bound;
        out[i] = solve(market, contract, grid, cfg).diverged ? 1 : 0;
    });
    return out;
}

std::size_t empirical_threshold_parallel(const MarketParams& market, const ContractSpec& contract,
                                         const SpatialGrid& grid, std::size_t n_lo, std::size_t n_hi,
                                         double divergence_bound, std::size_t fanout) {
    if (n_lo < 1 || n_hi <= n_lo) throw BracketInvalid("empirical threshold needs 1 <= n_lo < n_hi");
    fanout = std::max<std::size_t>(fanout, 2);
    {
        const std::size_t ends[] = {n_lo, n_hi};
        const auto flags = divergence_scan(market, contract, grid, ends, divergence_bound, Execution::Parallel);
        if (!flags[0]) throw BracketInvalid("explicit solve does not diverge at n_lo = " + std::to_string(n_lo));
        if (flags[1]) throw BracketInvalid("explicit solve diverges at n_hi = " + std::to_string(n_hi));
    }
    while (n_hi - n_lo > 1) {
        std::vector<std::size_t> probes;
        const std::size_t width = n_hi - n_lo;
        for (std::size_t j = 1; j < fanout; ++j) {
            const std::size_t p = n_lo + (width * j) / fanout;
            if (p > n_lo && p < n_hi && (probes.empty() || probes.back() != p)) probes.push_back(p);
        }
        if (probes.empty()) probes.push_back(n_lo + width / 2);
        const auto flags = divergence_scan(market, contract, grid, probes, divergence_bound, Execution::Parallel);
        // Same invariant as bisection: keep the last diverging probe below the first stable one.
        std::size_t new_lo = n_lo, new_hi = n_hi;
        for (std::size_t j = 0; j < probes.size(); ++j) {
            if (flags[j]) {
                new_lo = probes[j];
            } else {
                new_hi = probes[j];
                break;
            }
        }
        n_lo = new_lo;
        n_hi = new_hi;
    }
    return n_hi;
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace ghostfd
