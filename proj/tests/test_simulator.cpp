#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bai/errors.hpp"
#include "bai/instance_factory.hpp"
#include "bai/rng.hpp"
#include "bai/simulator.hpp"
#include "test_support.hpp"

using namespace bai;

namespace {

// Wilson score interval written from the textbook formula, z for 95% hard-coded.
Interval wilson_oracle(double x, double n)
{
    const double z = 1.959963984540054;
    const double p = x / n;
    const double center = (p + z * z / (2 * n)) / (1 + z * z / n);
    const double half = z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
    return {center - half, center + half};
}

}  // namespace

TEST_CASE("Wilson interval against the closed form")
{
    for (std::size_t n : {1, 10, 137, 1000, 100000}) {
        for (std::size_t x : {std::size_t{0}, n / 3, n / 2, n}) {
            const Interval got = wilson_interval(x, n, 0.95);
            const Interval want = wilson_oracle(static_cast<double>(x), static_cast<double>(n));
            CHECK(got.low == doctest::Approx(std::max(0.0, want.low)).epsilon(1e-12));
            CHECK(got.high == doctest::Approx(std::min(1.0, want.high)).epsilon(1e-12));
        }
    }
    const Interval zero = wilson_interval(0, 1000, 0.95);
    CHECK(zero.low == 0.0);
    CHECK(zero.high == doctest::Approx(0.0038267).epsilon(1e-4));
    CHECK(wilson_interval(5, 5, 0.95).high == 1.0);
    CHECK(wilson_interval(50, 100, 0.99).high > wilson_interval(50, 100, 0.95).high);
    CHECK_THROWS_AS(wilson_interval(3, 2, 0.95), ContractError);
    CHECK_THROWS_AS(wilson_interval(0, 0, 0.95), ContractError);
    CHECK_THROWS_AS(wilson_interval(1, 2, 1.0), ContractError);
}

TEST_CASE("property: Wilson intervals cover a known rate")
{
    test::SplitMix64 g{31};
    for (double p : {0.02, 0.1, 0.3}) {
        const int trials = 2000;
        const int n = 200;
        int covered = 0;
        for (int t = 0; t < trials; ++t) {
            std::size_t x = 0;
            for (int k = 0; k < n; ++k)
                x += static_cast<double>(g.next() >> 11) * 0x1.0p-53 < p ? 1 : 0;
            const Interval ci = wilson_interval(x, n, 0.95);
            covered += (ci.low <= p && p <= ci.high) ? 1 : 0;
        }
        CHECK(static_cast<double>(covered) / trials >= 0.93);
    }
}

TEST_CASE("error estimate bookkeeping")
{
    const ErrorEstimate e = make_estimate(0, 500, 0.95);
    CHECK(e.point == 0.0);
    CHECK_FALSE(e.has_log_point());
    CHECK(e.ci_low == 0.0);
    const ErrorEstimate f = make_estimate(25, 100, 0.9);
    CHECK(f.log_point() == doctest::Approx(std::log(0.25)));
    CHECK(f.ci_low <= f.point);
    CHECK(f.point <= f.ci_high);
}

TEST_CASE("estimate equals a direct loop over replication seeds")
{
    const BanditInstance inst({0.5, 0.45, 0.4});
    const StrategyConfig cfg = StrategyConfig::successive_rejects();
    std::size_t errors = 0;
    for (std::uint64_t r = 0; r < 700; ++r)
        errors += run_strategy(cfg, inst, 60, derive_stream_seed(9, r)).recommended != 0 ? 1 : 0;
    const ErrorEstimate e = estimate_error(cfg, inst, 60, 700, 9);
    CHECK(e.errors == errors);
    CHECK(e.replications == 700);
    CHECK(count_errors(cfg, inst, 60, {9, 0, 700}) == errors);
}

TEST_CASE("results do not depend on the number of workers")
{
    const BanditInstance inst({0.5, 0.45, 0.4, 0.35});
    for (const auto& cfg : {StrategyConfig::uniform(), StrategyConfig::successive_halving(),
                            StrategyConfig::ucb_e(3.0)}) {
        const ErrorEstimate one = estimate_error(cfg, inst, 100, 3000, 5, {0.95, 1});
        const ErrorEstimate four = estimate_error(cfg, inst, 100, 3000, 5, {0.95, 4});
        CHECK(one == four);
        const auto a1 = mean_allocation(cfg, inst, 100, {5, 10, 2000}, 1);
        const auto a3 = mean_allocation(cfg, inst, 100, {5, 10, 2000}, 3);
        CHECK(a1 == a3);
        const auto r1 = simulate_runs(cfg, inst, 100, {5, 0, 1500}, 1);
        const auto r3 = simulate_runs(cfg, inst, 100, {5, 0, 1500}, 3);
        CHECK(r1 == r3);
    }
}

TEST_CASE("sweep rows use disjoint replication blocks")
{
    const FlippedFamily family = make_alpha_family(4, 1.0);
    const std::vector<std::size_t> budgets{20, 40};
    const std::size_t R = 300;
    const StrategyConfig cfg = StrategyConfig::successive_rejects();
    const auto rows = sweep_family(cfg, family, budgets, R, 8, {}, "f");
    REQUIRE(rows.size() == 2);
    for (std::size_t t = 0; t < 2; ++t) {
        CHECK(rows[t].budget == budgets[t]);
        CHECK(rows[t].family_id == "f");
        std::size_t worst = 0;
        for (Arm i = 0; i < 4; ++i) {
            const ReplicationBlock block{8, (t * 4 + i) * R, R};
            const std::size_t errors = count_errors(cfg, family_instance(family, i), budgets[t], block);
            CHECK(rows[t].per_i[i].errors == errors);
            if (errors > rows[t].per_i[worst].errors)
                worst = i;
        }
        CHECK(rows[t].worst_i == worst);
        CHECK(rows[t].worst_error == rows[t].per_i[worst]);
    }
    CHECK_THROWS_AS(sweep_family(cfg, family, {}, R, 8), ContractError);
}

TEST_CASE("parallel_for propagates the first failure")
{
    CHECK_THROWS_AS(parallel_for(100, 3,
                                 [](std::size_t n) {
                                     if (n == 37)
                                         throw ContractError("boom");
                                 }),
                    ContractError);
    std::vector<int> seen(1000, 0);
    parallel_for(1000, 4, [&](std::size_t n) { seen[n] += 1; });
    CHECK(std::count(seen.begin(), seen.end(), 1) == 1000);
}

TEST_CASE("misidentification rate decreases with the budget")
{
    const BanditInstance inst({0.5, 0.4, 0.4, 0.4});
    const auto cfg = StrategyConfig::successive_rejects();
    const ErrorEstimate small = estimate_error(cfg, inst, 40, 4000, 1);
    const ErrorEstimate large = estimate_error(cfg, inst, 400, 4000, 1);
    CHECK(large.ci_high < small.ci_low);
}
