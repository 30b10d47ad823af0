#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bai/bandit.hpp"
#include "bai/errors.hpp"

namespace bai {

enum class StrategyKind { uniform, successive_rejects, successive_halving, ucb_e };

std::string_view strategy_name(StrategyKind kind) noexcept;

/// Inverse of strategy_name. Throws ContractError for unknown names.
StrategyKind parse_strategy_kind(std::string_view name);

/// Strategy plus its parameter. UCB-E carries the exploration parameter a; the others carry none.
class StrategyConfig {
public:
    StrategyConfig(StrategyKind kind, std::optional<double> exploration_a);

    static StrategyConfig uniform() { return {StrategyKind::uniform, std::nullopt}; }
    static StrategyConfig successive_rejects() { return {StrategyKind::successive_rejects, std::nullopt}; }
    static StrategyConfig successive_halving() { return {StrategyKind::successive_halving, std::nullopt}; }
    static StrategyConfig ucb_e(double exploration_a) { return {StrategyKind::ucb_e, exploration_a}; }

    StrategyKind kind() const noexcept { return kind_; }
    std::optional<double> exploration_a() const noexcept { return a_; }

    friend bool operator==(const StrategyConfig&, const StrategyConfig&) = default;

private:
    StrategyKind kind_;
    std::optional<double> a_;
};

/// Successive Rejects phase lengths n_1..n_{K-1}: ceil((T - K) / (logbar(K) (K + 1 - j))), at least 1.
std::vector<std::size_t> sr_allocation(std::size_t K, std::size_t T);

struct HalvingRound {
    std::size_t survivors;
    std::size_t pulls_per_arm;
    friend bool operator==(const HalvingRound&, const HalvingRound&) = default;
};

/// Successive Halving schedule over ceil(log2 K) rounds.
///
/// Each round gives every survivor max(1, floor(T / (rounds * survivors))) pulls,
/// capped by what is left of the budget, so the schedule never spends more than T.
std::vector<HalvingRound> sh_rounds(std::size_t K, std::size_t T);

/// (25/36) (T - K) / h_incl, the exploration parameter used when the complexity is known.
double default_exploration(std::size_t K, std::size_t T, double h_incl);

namespace detail {

template <class Oracle>
class Tally {
public:
    Tally(std::size_t arms, Oracle& oracle) : sums_(arms, 0), pulls_(arms, 0), oracle_(oracle) {}

    void pull(Arm k, std::size_t times = 1)
    {
        std::size_t s = 0;
        for (std::size_t n = 0; n < times; ++n)
            s += static_cast<std::size_t>(oracle_.draw(k));
        sums_[k] += s;
        pulls_[k] += times;
    }

    double mean(Arm k) const
    {
        return pulls_[k] == 0 ? 0.0 : static_cast<double>(sums_[k]) / static_cast<double>(pulls_[k]);
    }

    std::size_t pulls(Arm k) const { return pulls_[k]; }

    /// First (highest) or last (lowest) arm of the ranking by score, where ties rank the lower index first.
    /// So a tie picks the lowest index when `highest` and the highest index otherwise.
    template <class Score>
    Arm select(const std::vector<Arm>& candidates, Score score, bool highest, bool& tie) const
    {
        Arm chosen = candidates.front();
        double best = score(chosen);
        bool tied = false;
        for (std::size_t n = 1; n < candidates.size(); ++n) {
            const double v = score(candidates[n]);
            if (highest ? v > best : v < best) {
                best = v;
                chosen = candidates[n];
                tied = false;
            } else if (v == best) {
                tied = true;
                if (!highest)
                    chosen = candidates[n];
            }
        }
        tie = tie || tied;
        return chosen;
    }

    RunResult finish(Arm recommended, std::vector<Arm> eliminated, bool tie) const
    {
        RunResult r;
        r.recommended = recommended;
        r.pulls = pulls_;
        r.empirical_means.resize(pulls_.size());
        for (Arm k = 0; k < pulls_.size(); ++k)
            r.empirical_means[k] = mean(k);
        r.eliminated = std::move(eliminated);
        r.tie_broken = tie;
        return r;
    }

private:
    std::vector<std::size_t> sums_;
    std::vector<std::size_t> pulls_;
    Oracle& oracle_;
};

inline std::vector<Arm> all_arms(std::size_t K)
{
    std::vector<Arm> arms(K);
    for (Arm k = 0; k < K; ++k)
        arms[k] = k;
    return arms;
}

template <class Oracle>
RunResult play_uniform(std::size_t K, std::size_t T, Oracle& oracle)
{
    Tally<Oracle> tally(K, oracle);
    for (Arm k = 0; k < K; ++k)
        tally.pull(k, T / K + (k < T % K ? 1 : 0));
    bool tie = false;
    const Arm rec = tally.select(all_arms(K), [&](Arm k) { return tally.mean(k); }, true, tie);
    return tally.finish(rec, {}, tie);
}

template <class Oracle>
RunResult play_successive_rejects(std::size_t K, std::size_t T, Oracle& oracle)
{
    Tally<Oracle> tally(K, oracle);
    const auto phases = sr_allocation(K, T);
    std::vector<Arm> active = all_arms(K);
    std::vector<Arm> eliminated;
    bool tie = false;
    std::size_t previous = 0;
    for (const std::size_t n : phases) {
        for (const Arm k : active)
            tally.pull(k, n - previous);
        previous = n;
        const Arm worst = tally.select(active, [&](Arm k) { return tally.mean(k); }, false, tie);
        active.erase(std::find(active.begin(), active.end(), worst));
        eliminated.push_back(worst);
    }
    return tally.finish(active.front(), std::move(eliminated), tie);
}

template <class Oracle>
RunResult play_successive_halving(std::size_t K, std::size_t T, Oracle& oracle)
{
    Tally<Oracle> tally(K, oracle);
    std::vector<Arm> active = all_arms(K);
    std::vector<Arm> eliminated;
    bool tie = false;
    for (const HalvingRound& round : sh_rounds(K, T)) {
        for (const Arm k : active)
            tally.pull(k, round.pulls_per_arm);
        // best first; stable so equal means keep ascending index order
        std::stable_sort(active.begin(), active.end(),
                         [&](Arm a, Arm b) { return tally.mean(a) > tally.mean(b); });
        const std::size_t keep = (active.size() + 1) / 2;
        if (tally.mean(active[keep - 1]) == tally.mean(active[keep]))
            tie = true;
        for (std::size_t n = active.size(); n > keep; --n)
            eliminated.push_back(active[n - 1]);
        active.resize(keep);
        std::sort(active.begin(), active.end());
    }
    return tally.finish(active.front(), std::move(eliminated), tie);
}

template <class Oracle>
RunResult play_ucb_e(std::size_t K, std::size_t T, double a, Oracle& oracle)
{
    Tally<Oracle> tally(K, oracle);
    std::vector<double> index(K);
    bool tie = false;
    for (Arm k = 0; k < K; ++k) {
        tally.pull(k);
        index[k] = tally.mean(k) + std::sqrt(a);
    }
    for (std::size_t t = K; t < T; ++t) {
        Arm chosen = 0;
        bool tied = false;
        for (Arm k = 1; k < K; ++k) {
            if (index[k] > index[chosen]) {
                chosen = k;
                tied = false;
            } else if (index[k] == index[chosen]) {
                tied = true;
            }
        }
        tie = tie || tied;
        tally.pull(chosen);
        index[chosen] = tally.mean(chosen) + std::sqrt(a / static_cast<double>(tally.pulls(chosen)));
    }
    const Arm rec = tally.select(all_arms(K), [&](Arm k) { return tally.mean(k); }, true, tie);
    return tally.finish(rec, {}, tie);
}

void check_budget(const StrategyConfig& config, std::size_t K, std::size_t T);

}  // namespace detail

/**
 * Plays one fixed-budget game against `oracle`, which must provide
 * `int draw(Arm k)` returning the next reward of arm k.
 *
 * Every strategy is a deterministic function of the rewards it observes.
 * Equal means rank the lower arm index first: it wins a recommendation and survives an elimination.
 */
template <class Oracle>
RunResult play(const StrategyConfig& config, std::size_t K, std::size_t T, Oracle& oracle)
{
    detail::check_budget(config, K, T);
    switch (config.kind()) {
    case StrategyKind::uniform:
        return detail::play_uniform(K, T, oracle);
    case StrategyKind::successive_rejects:
        return detail::play_successive_rejects(K, T, oracle);
    case StrategyKind::successive_halving:
        return detail::play_successive_halving(K, T, oracle);
    case StrategyKind::ucb_e:
        return detail::play_ucb_e(K, T, *config.exploration_a(), oracle);
    }
    throw ContractError("unknown strategy kind");
}

RunResult run_strategy(const StrategyConfig& config, const BanditInstance& instance, std::size_t T,
                       ArmStreams& streams);

/// Runs against the per-arm streams of `replication_seed`.
RunResult run_strategy(const StrategyConfig& config, const BanditInstance& instance, std::size_t T,
                       std::uint64_t replication_seed);

}  // namespace bai
