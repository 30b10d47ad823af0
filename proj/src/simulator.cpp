#include "bai/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "bai/errors.hpp"

namespace bai {
namespace {

constexpr std::size_t kChunk = 512;

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

std::vector<bool> optimal_mask(const BanditInstance& instance)
{
    std::vector<bool> mask(instance.arms(), false);
    for (const Arm k : best_arm_set(instance))
        mask[k] = true;
    return mask;
}

}  // namespace

Interval wilson_interval(std::size_t errors, std::size_t n, double level)
{
    if (n == 0 || errors > n)
        throw ContractError("Wilson interval needs 0 <= errors <= n and n >= 1");
    if (!(level > 0.0 && level < 1.0))
        throw ContractError("confidence level must lie in (0, 1)");
    const boost::math::normal_distribution<double> standard;
    const double z = boost::math::quantile(standard, 0.5 + level / 2.0);
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(errors) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    Interval ci{std::clamp(center - half, 0.0, 1.0), std::clamp(center + half, 0.0, 1.0)};
    if (errors == 0)
        ci.low = 0.0;
    if (errors == n)
        ci.high = 1.0;
    return ci;
}

double ErrorEstimate::log_point() const
{
    return errors == 0 ? -std::numeric_limits<double>::infinity() : std::log(point);
}

unsigned default_workers() noexcept
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

ErrorEstimate make_estimate(std::size_t errors, std::size_t R, double level)
{
    const Interval ci = wilson_interval(errors, R, level);
    ErrorEstimate e;
    e.replications = R;
    e.errors = errors;
    e.point = static_cast<double>(errors) / static_cast<double>(R);
    e.ci_low = std::min(ci.low, e.point);
    e.ci_high = std::max(ci.high, e.point);
    e.level = level;
    return e;
}

std::vector<RunResult> simulate_runs(const StrategyConfig& config, const BanditInstance& instance, std::size_t T,
                                     const ReplicationBlock& block, unsigned workers)
{
    detail::check_budget(config, instance.arms(), T);
    std::vector<RunResult> results(block.count);
    parallel_for(chunk_count(block.count), workers, [&](std::size_t chunk) {
        const std::size_t end = std::min(block.count, (chunk + 1) * kChunk);
        for (std::size_t n = chunk * kChunk; n < end; ++n)
            results[n] = run_strategy(config, instance, T, derive_stream_seed(block.master_seed, block.first + n));
    });
    return results;
}

std::size_t count_errors(const StrategyConfig& config, const BanditInstance& instance, std::size_t T,
                         const ReplicationBlock& block, unsigned workers)
{
    detail::check_budget(config, instance.arms(), T);
    const auto optimal = optimal_mask(instance);
    std::vector<std::size_t> per_chunk(chunk_count(block.count), 0);
    parallel_for(per_chunk.size(), workers, [&](std::size_t chunk) {
        const std::size_t end = std::min(block.count, (chunk + 1) * kChunk);
        std::size_t errors = 0;
        for (std::size_t n = chunk * kChunk; n < end; ++n) {
            ArmStreams streams(instance, derive_stream_seed(block.master_seed, block.first + n));
            if (!optimal[play(config, instance.arms(), T, streams).recommended])
                ++errors;
        }
        per_chunk[chunk] = errors;
    });
    return std::accumulate(per_chunk.begin(), per_chunk.end(), std::size_t{0});
}

std::vector<double> mean_allocation(const StrategyConfig& config, const BanditInstance& instance, std::size_t T,
                                    const ReplicationBlock& block, unsigned workers)
{
    if (block.count == 0)
        throw ContractError("mean allocation needs at least one replication");
    const std::size_t K = instance.arms();
    detail::check_budget(config, K, T);
    // integer partial sums keep the reduction independent of scheduling
    std::vector<std::vector<std::size_t>> per_chunk(chunk_count(block.count), std::vector<std::size_t>(K, 0));
    parallel_for(per_chunk.size(), workers, [&](std::size_t chunk) {
        const std::size_t end = std::min(block.count, (chunk + 1) * kChunk);
        for (std::size_t n = chunk * kChunk; n < end; ++n) {
            ArmStreams streams(instance, derive_stream_seed(block.master_seed, block.first + n));
            const RunResult r = play(config, K, T, streams);
            for (Arm k = 0; k < K; ++k)
                per_chunk[chunk][k] += r.pulls[k];
        }
    });
    std::vector<double> mean(K, 0.0);
    for (Arm k = 0; k < K; ++k) {
        std::size_t total = 0;
        for (const auto& c : per_chunk)
            total += c[k];
        mean[k] = static_cast<double>(total) / static_cast<double>(block.count);
    }
    return mean;
}

ErrorEstimate estimate_error(const StrategyConfig& config, const BanditInstance& instance, std::size_t T,
                             std::size_t R, std::uint64_t master_seed, const SimOptions& options)
{
    if (R == 0)
        throw ContractError("estimate_error needs R >= 1");
    const std::size_t errors = count_errors(config, instance, T, {master_seed, 0, R}, options.workers);
    return make_estimate(errors, R, options.level);
}

std::vector<SweepRow> sweep_family(const StrategyConfig& config, const FlippedFamily& family,
                                   std::span<const std::size_t> budgets, std::size_t R, std::uint64_t master_seed,
                                   const SimOptions& options, const std::string& family_id)
{
    if (budgets.empty())
        throw ContractError("sweep needs a non-empty budget grid");
    if (R == 0)
        throw ContractError("sweep needs R >= 1");
    const std::size_t K = family.arms();
    std::vector<BanditInstance> problems;
    for (Arm i = 0; i < K; ++i)
        problems.push_back(family_instance(family, i));

    std::vector<SweepRow> rows;
    for (std::size_t t = 0; t < budgets.size(); ++t) {
        SweepRow row;
        row.family_id = family_id;
        row.strategy = config.kind();
        row.arms = K;
        row.budget = budgets[t];
        for (Arm i = 0; i < K; ++i) {
            const ReplicationBlock block{master_seed, (static_cast<std::uint64_t>(t) * K + i) * R, R};
            const std::size_t errors = count_errors(config, problems[i], budgets[t], block, options.workers);
            row.per_i.push_back(make_estimate(errors, R, options.level));
        }
        for (Arm i = 1; i < K; ++i) {
            if (row.per_i[i].errors > row.per_i[row.worst_i].errors)
                row.worst_i = i;
        }
        row.worst_error = row.per_i[row.worst_i];
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace bai
