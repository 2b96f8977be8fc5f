#include "fixtures.hpp"

#include "ghostfd/analytic.hpp"
#include "ghostfd/errors.hpp"
#include "ghostfd/profile.hpp"
#include "ghostfd/schemes.hpp"
#include "ghostfd/stability.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace ghostfd;
using namespace ghostfd::testing;

namespace {

SchemeConfig scheme(SchemeKind kind, std::size_t n) {
    SchemeConfig s;
    s.kind = kind;
    s.steps = n;
    return s;
}

const SpatialGrid& reference_grid() {
    static const SpatialGrid g = build_uniform(default_smax(reference_market(), 1.0), 100, kBarrier);
    return g;
}

}  // namespace

TEST_CASE("initial condition is the barrier indicator") {
    const SpatialGrid on = build_barrier_on_node(13782.11, 100, kBarrier);
    const auto v = initial_condition(on, 1.0);
    CHECK(v[on.barrier_index()] == 1.0);
    CHECK(v[on.barrier_index() - 1] == 0.0);

    const SpatialGrid above = build_uniform(100.0, 10, 150.0);
    const auto z = initial_condition(above, 1.0);
    CHECK(std::all_of(z.begin(), z.end(), [](double x) { return x == 0.0; }));

    const auto t1 = initial_condition(build_uniform(13782.0, 100, kBarrier), 1.0);
    CHECK(std::count(t1.begin(), t1.end(), 1.0) == 45);
    CHECK(t1[55] == 0.0);
    CHECK(t1[56] == 1.0);
}

TEST_CASE("explicit step basics") {
    const SpatialGrid& g = reference_grid();
    std::vector<double> v(g.size());
    std::iota(v.begin(), v.end(), 0.0);
    TridiagonalOperator zero(g.size());
    CHECK(step_explicit(v, zero) == v);

    // Constants equal to the rebate are a fixed point at r = 0.
    const auto op = assemble_interior(g, {0.0, 0.01, 0.2}, 1.0 / 5000.0, 1.0);
    const std::vector<double> ones(g.size(), 1.0);
    const auto out = step_explicit(ones, op);
    for (double x : out) CHECK(x == doctest::Approx(1.0).epsilon(1e-14));

    // From the indicator, node u-1 only sees the ghost source in the first step.
    const auto op3600 = assemble_interior(g, {0.0, 0.0, 0.2}, 1.0 / 3600.0, 1.0);
    const auto first = step_explicit(initial_condition(g, 1.0), op3600);
    const std::size_t u = g.barrier_index();
    CHECK(first[u - 1] == op3600.source[u - 1]);
    CHECK(first[u - 2] == 0.0);
}

TEST_CASE("theta scheme degeneracies") {
    const SpatialGrid& g = reference_grid();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> v(g.size());
    for (auto& x : v) x = unit(rng);
    for (std::size_t i = g.barrier_index(); i < g.size(); ++i) v[i] = 1.0;

    const auto op = assemble_interior(g, {0.03, 0.01, 0.25}, 1.0 / 4000.0, 1.0);
    const auto theta0 = step_theta(v, op, op, 0.0);
    const auto expl = step_explicit(v, op);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(theta0[i] - expl[i]) <= 1e-13);

    const auto op0 = assemble_interior(g, {0.0, 0.0, 0.25}, 1.0 / 50.0, 1.0);
    const std::vector<double> ones(g.size(), 1.0);
    for (double x : step_theta(ones, op0, op0, 1.0)) CHECK(x == doctest::Approx(1.0).epsilon(1e-13));
    for (double x : step_theta(ones, op0, op0, 0.5)) CHECK(x == doctest::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS((void)step_theta(v, op, op, 1.5), InvalidArgument);
}

TEST_CASE("TR-BDF2 with a zero operator is the identity") {
    const SpatialGrid& g = reference_grid();
    std::vector<double> v(g.size());
    std::iota(v.begin(), v.end(), 1.0);
    const TridiagonalOperator zero(g.size());
    const auto out = step_trbdf2(v, zero, zero, zero);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(out[i] == doctest::Approx(v[i]).epsilon(1e-15));
    const std::vector<double> ones(g.size(), 1.0);
    const auto op = assemble_interior(g, {0.0, 0.0, 0.2}, 1.0 / 400.0, 1.0);
    for (double x : step_trbdf2(ones, op, op, op)) CHECK(x == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("explicit solves around the ghost threshold") {
    const MarketParams m = reference_market();
    const ContractSpec c = reference_contract();
    const SpatialGrid& g = reference_grid();

    const SolveResult stable = solve(m, c, g, scheme(SchemeKind::ExplicitEuler, 3600));
    CHECK_FALSE(stable.diverged);
    CHECK(std::abs(read_price(stable, g, kSpot) - kReferencePrice) < 2e-3);

    const SolveResult unstable = solve(m, c, g, scheme(SchemeKind::ExplicitEuler, 3000));
    CHECK(unstable.diverged);
    REQUIRE(unstable.diverged_at_step.has_value());
    CHECK(*unstable.diverged_at_step <= 3000);
    CHECK(unstable.steps_taken == *unstable.diverged_at_step);

    const SpatialGrid on = build_barrier_on_node(13782.11, 100, kBarrier);
    const std::size_t n = steps_for(1.0, dt_max_interior(on, m, 1.0)) + 1;
    const SolveResult cfl = solve(m, c, on, scheme(SchemeKind::ExplicitEuler, n));
    CHECK_FALSE(cfl.diverged);
}

TEST_CASE("explicit values stay in [0, rebate] with a non-negative iteration matrix") {
    // The norm bound alone allows a negative ghost-row diagonal; the discrete maximum principle needs nonneg_diag.
    const MarketParams m = reference_market();
    for (double smax : {13662.0, 13760.0, 13782.0}) {
        const SpatialGrid g = build_uniform(smax, 100, kBarrier);
        const std::size_t n = steps_for(1.0, ghost_thresholds(g, m, 1.0).nonneg_diag) + 1;
        SchemeConfig s = scheme(SchemeKind::ExplicitEuler, n);
        for (std::size_t k = 1; k <= n; k += n / 7) s.snapshot_steps.push_back(k);
        const SolveResult r = solve(m, reference_contract(), g, s);
        CHECK_FALSE(r.diverged);
        for (const auto& snap : r.snapshots)
            for (double v : snap.values) {
                CHECK(v >= -1e-14);
                CHECK(v <= 1.0 + 1e-14);
            }
    }
}

TEST_CASE("Crank-Nicolson and TR-BDF2 prices at N = 400") {
    const MarketParams m = reference_market();
    const SolveResult cn = solve(m, reference_contract(), reference_grid(), scheme(SchemeKind::CrankNicolson, 400));
    CHECK(std::abs(read_price(cn, reference_grid(), kSpot) - kReferencePrice) < 5e-3);
    const SolveResult tr = solve(m, reference_contract(), reference_grid(), scheme(SchemeKind::TRBDF2, 400));
    CHECK(std::abs(read_price(tr, reference_grid(), kSpot) - kReferencePrice) < 5e-3);
}

TEST_CASE("TR-BDF2 damps the ghost-row transient within a few steps") {
    const SpatialGrid& g = reference_grid();
    SchemeConfig s = scheme(SchemeKind::TRBDF2, 400);
    s.snapshot_steps = {1, 2, 3, 4, 5, 6, 7, 8};
    const SolveResult r = solve(reference_market(), reference_contract(), g, s);
    REQUIRE(r.snapshots.size() == 8);
    const std::size_t u = g.barrier_index();
    // First step: stiff ghost mode amplified by R(z) ~ -0.17 at z ~ -17.5, visible as an overshoot.
    CHECK(r.snapshots[0].values[u - 1] > 1.0);
    for (std::size_t j = 2; j < r.snapshots.size(); ++j) {
        CAPTURE(r.snapshots[j].step);
        const auto prof = barrier_profile(r.snapshots[j].values, g, 1.0, 8);
        CHECK(count_sign_changes(prof) == 0);
    }
}

TEST_CASE("TR-BDF2 is second order in time") {
    // Self-convergence at fixed space grid on a barrier-on-node grid.
    const SpatialGrid g = build_barrier_on_node(13782.11, 100, kBarrier);
    auto price = [&](std::size_t n) {
        return read_price(solve(reference_market(), reference_contract(), g, scheme(SchemeKind::TRBDF2, n)), g, kSpot);
    };
    const double p1 = price(100), p2 = price(200), p3 = price(400);
    const double order = std::log2(std::abs(p1 - p2) / std::abs(p2 - p3));
    CAPTURE(order);
    CHECK(order > 1.8);
    CHECK(order < 2.3);
}

TEST_CASE("ghost and on-node grids converge to the same price") {
    const MarketParams m = reference_market();
    const double smax = default_smax(m, 1.0);
    for (const SpatialGrid& g : {build_uniform(smax, 400, kBarrier), build_barrier_on_node(smax, 400, kBarrier)}) {
        const StabilityReport rep = analyze(g, m, reference_contract());
        const std::size_t n = std::max(rep.n_min_ghost, rep.n_min_standard) + 10;
        const SolveResult r = solve(m, reference_contract(), g, scheme(SchemeKind::ExplicitEuler, n));
        CHECK_FALSE(r.diverged);
        CHECK(std::abs(read_price(r, g, kSpot) - kReferencePrice) < 1e-3);
    }
}

TEST_CASE("vol term structure with matching total variance") {
    // With r = q = 0 the hit probability depends on the integrated variance only.
    MarketParams m = reference_market();
    m.vol = TermStructure({0.5}, {0.1, std::sqrt(0.07)});
    const SpatialGrid g = build_uniform(default_smax(reference_market(), 1.0), 200, kBarrier);
    const SolveResult r = solve(m, reference_contract(), g, scheme(SchemeKind::TRBDF2, 800));
    CHECK(std::abs(read_price(r, g, kSpot) - kReferencePrice) < 3e-3);
    const MarketParams reversed = [&] {
        MarketParams x = m;
        x.vol = TermStructure({0.5}, {std::sqrt(0.07), 0.1});
        return x;
    }();
    const SolveResult r2 = solve(reversed, reference_contract(), g, scheme(SchemeKind::TRBDF2, 800));
    CHECK(std::abs(read_price(r2, g, kSpot) - kReferencePrice) < 3e-3);
}

TEST_CASE("read_price interpolation") {
    const SpatialGrid g(10.0, 10, 75.0);  // u = 8, S_7 = 70
    std::vector<double> v(g.size(), 0.0);
    v[3] = 0.0;
    v[4] = 1.0;
    v[7] = 0.6;
    for (std::size_t i = 8; i < v.size(); ++i) v[i] = 1.0;
    CHECK(read_price(v, g, 1.0, 40.0) == 1.0);
    CHECK(read_price(v, g, 1.0, 35.0) == doctest::Approx(0.5));
    CHECK(read_price(v, g, 1.0, 72.5) == doctest::Approx(0.8));  // toward (L+, rebate)
    CHECK(read_price(v, g, 1.0, 77.0) == 1.0);
    CHECK(read_price(v, g, 1.0, 100.0) == 1.0);
    CHECK_THROWS_AS((void)read_price(v, g, 1.0, 100.5), OutOfDomain);
    CHECK_THROWS_AS((void)read_price(v, g, 1.0, -1.0), OutOfDomain);

    const SolveResult r = solve(reference_market(), reference_contract(), reference_grid(), scheme(SchemeKind::CrankNicolson, 400));
    const double p = read_price(r, reference_grid(), kSpot);
    CHECK(kSpot / reference_grid().spacing() == doctest::Approx(45.84).epsilon(1e-3));
    CHECK(p >= std::min(r.final_values[45], r.final_values[46]));
    CHECK(p <= std::max(r.final_values[45], r.final_values[46]));
}

TEST_CASE("scheme names") {
    CHECK(parse_scheme("cn") == SchemeKind::CrankNicolson);
    CHECK(parse_scheme("tr-bdf2") == SchemeKind::TRBDF2);
    CHECK(parse_scheme("explicit") == SchemeKind::ExplicitEuler);
    CHECK_THROWS_AS((void)parse_scheme("rk4"), InvalidArgument);
    SchemeConfig bad;
    bad.divergence_bound = 1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}
