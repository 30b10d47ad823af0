#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "bai/bandit.hpp"
#include "bai/instance_factory.hpp"
#include "bai/strategies.hpp"

namespace bai {

struct Interval {
    double low;
    double high;
};

/// Wilson score interval for `errors` successes out of `n`, clamped to [0, 1].
Interval wilson_interval(std::size_t errors, std::size_t n, double level);

/// Monte Carlo estimate of the misidentification probability.
struct ErrorEstimate {
    std::size_t replications = 0;
    std::size_t errors = 0;
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double level = 0.95;

    /// log(point); false when no error was observed (the estimate is below resolution 1/R).
    bool has_log_point() const noexcept { return errors > 0; }
    double log_point() const;

    friend bool operator==(const ErrorEstimate&, const ErrorEstimate&) = default;
};

struct SimOptions {
    double level = 0.95;
    unsigned workers = 1;
};

/// Number of workers to use when the caller has no preference.
unsigned default_workers() noexcept;

/**
 * Runs `fn(item)` for every item in [0, count) on `workers` threads.
 *
 * Items are handed out through a shared counter, so `fn` must write only to
 * per-item state. The first exception thrown by any item is rethrown here.
 */
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn)
{
    if (workers <= 1 || count <= 1) {
        for (std::size_t n = 0; n < count; ++n)
            fn(n);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (std::size_t n = next++; n < count; n = next++) {
            try {
                fn(n);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = count;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const std::size_t extra = std::min<std::size_t>(workers, count) - 1;
        for (std::size_t w = 0; w < extra; ++w)
            pool.emplace_back(body);
        body();
    }
    if (failure)
        std::rethrow_exception(failure);
}

/// Replications [first, first + count) of one configuration. Replication r uses
/// the per-arm streams of derive_stream_seed(master_seed, r).
struct ReplicationBlock {
    std::uint64_t master_seed = 0;
    std::uint64_t first = 0;
    std::size_t count = 0;
};

/// Runs every replication of `block` and returns the results in replication order.
std::vector<RunResult> simulate_runs(const StrategyConfig& config, const BanditInstance& instance, std::size_t T,
                                     const ReplicationBlock& block, unsigned workers = 1);

/// Number of replications in `block` whose recommendation is not an optimal arm.
std::size_t count_errors(const StrategyConfig& config, const BanditInstance& instance, std::size_t T,
                         const ReplicationBlock& block, unsigned workers = 1);

/// Mean pull count of every arm over the replications of `block`.
std::vector<double> mean_allocation(const StrategyConfig& config, const BanditInstance& instance, std::size_t T,
                                    const ReplicationBlock& block, unsigned workers = 1);

/// R replications on streams 0..R-1 of `master_seed`, with a Wilson interval at `options.level`.
ErrorEstimate estimate_error(const StrategyConfig& config, const BanditInstance& instance, std::size_t T,
                             std::size_t R, std::uint64_t master_seed, const SimOptions& options = {});

ErrorEstimate make_estimate(std::size_t errors, std::size_t R, double level);

struct SweepRow {
    std::string family_id;
    StrategyKind strategy = StrategyKind::uniform;
    std::size_t arms = 0;
    std::size_t budget = 0;
    Arm worst_i = 0;
    ErrorEstimate worst_error;
    std::vector<ErrorEstimate> per_i;  ///< per_i[i] estimates P_i(recommended != i)
};

/**
 * For each budget in `budgets`, estimates P_i(recommended != i) on every
 * problem i of the family and records the maximizing i (lowest on ties).
 *
 * Budget t_idx and problem i use replications
 * [(t_idx K + i) R, (t_idx K + i + 1) R) of `master_seed`, so blocks never overlap.
 */
std::vector<SweepRow> sweep_family(const StrategyConfig& config, const FlippedFamily& family,
                                   std::span<const std::size_t> budgets, std::size_t R, std::uint64_t master_seed,
                                   const SimOptions& options = {}, const std::string& family_id = "family");

}  // namespace bai
