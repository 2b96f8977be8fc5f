// Serial vs OpenMP batch solves on the one-touch setup (M = 100, S_max = 13782).
// Usage: bench_batch [repeats]

#include "ghostfd/batch.hpp"
#include "ghostfd/stability.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <numeric>

using namespace ghostfd;

namespace {

template <typename F>
double time_ms(F&& f, int repeats) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < repeats; ++r) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    MarketParams market;
    market.spot = 6317.80;
    market.vol = TermStructure(0.20);
    const ContractSpec contract{7581.36, 1.0, 1.0};
    const SpatialGrid grid = build_uniform(13782.0, 100, contract.barrier);

    std::vector<std::size_t> steps(64);
    std::iota(steps.begin(), steps.end(), std::size_t{3300});

    std::vector<char> serial, parallel;
    const double t_serial = time_ms([&] { serial = divergence_scan(market, contract, grid, steps, 10.0, Execution::Serial); }, repeats);
    const double t_parallel = time_ms([&] { parallel = divergence_scan(market, contract, grid, steps, 10.0, Execution::Parallel); }, repeats);

    std::size_t threshold_serial = 0, threshold_parallel = 0;
    const double t_bisect = time_ms([&] { threshold_serial = empirical_threshold(market, contract, grid, 1600, 3400); }, repeats);
    const double t_multi = time_ms([&] { threshold_parallel = empirical_threshold_parallel(market, contract, grid, 1600, 3400); }, repeats);

    std::cout << "threads            " << max_threads() << '\n'
              << "divergence_scan    serial " << t_serial << " ms, parallel " << t_parallel << " ms, speedup "
              << t_serial / t_parallel << ", identical " << (serial == parallel ? "yes" : "NO") << '\n'
              << "empirical_threshold bisection " << t_bisect << " ms (" << threshold_serial << "), multisection "
              << t_multi << " ms (" << threshold_parallel << ")\n";
    return serial == parallel && threshold_serial == threshold_parallel ? 0 : 1;
}
