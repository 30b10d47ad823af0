#include "bai/strategies.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace bai {

std::string_view strategy_name(StrategyKind kind) noexcept
{
    switch (kind) {
    case StrategyKind::uniform:
        return "uniform";
    case StrategyKind::successive_rejects:
        return "successive_rejects";
    case StrategyKind::successive_halving:
        return "successive_halving";
    case StrategyKind::ucb_e:
        return "ucb_e";
    }
    return "unknown";
}

StrategyKind parse_strategy_kind(std::string_view name)
{
    for (const auto kind : {StrategyKind::uniform, StrategyKind::successive_rejects,
                            StrategyKind::successive_halving, StrategyKind::ucb_e}) {
        if (strategy_name(kind) == name)
            return kind;
    }
    throw ContractError("unknown strategy kind '" + std::string(name) + "'");
}

StrategyConfig::StrategyConfig(StrategyKind kind, std::optional<double> exploration_a) : kind_(kind), a_(exploration_a)
{
    if (kind_ == StrategyKind::ucb_e) {
        if (!a_ || !(*a_ > 0.0) || !std::isfinite(*a_))
            throw ContractError("ucb_e requires a finite exploration parameter a > 0");
    } else if (a_) {
        throw ContractError(std::string(strategy_name(kind_)) + " takes no exploration parameter");
    }
}

std::vector<std::size_t> sr_allocation(std::size_t K, std::size_t T)
{
    if (K < 2)
        throw ContractError("successive rejects needs K >= 2");
    if (T < K)
        throw BudgetError("budget T = " + std::to_string(T) + " is below K = " + std::to_string(K));
    double logbar = 0.5;
    for (std::size_t i = 2; i <= K; ++i)
        logbar += 1.0 / static_cast<double>(i);
    const double spare = static_cast<double>(T - K);
    std::vector<std::size_t> n(K - 1);
    for (std::size_t j = 1; j < K; ++j) {
        const double len = std::ceil(spare / (logbar * static_cast<double>(K + 1 - j)));
        n[j - 1] = std::max<std::size_t>(1, static_cast<std::size_t>(len));
    }
    return n;
}

std::vector<HalvingRound> sh_rounds(std::size_t K, std::size_t T)
{
    if (K < 2)
        throw ContractError("successive halving needs K >= 2");
    if (T < K)
        throw BudgetError("budget T = " + std::to_string(T) + " is below K = " + std::to_string(K));
    const std::size_t rounds = std::bit_width(K - 1);  // ceil(log2 K)
    std::vector<HalvingRound> schedule;
    std::size_t survivors = K;
    std::size_t remaining = T;
    for (std::size_t r = 0; r < rounds; ++r) {
        std::size_t per_arm = std::max<std::size_t>(1, T / (rounds * survivors));
        per_arm = std::min(per_arm, remaining / survivors);
        remaining -= per_arm * survivors;
        schedule.push_back({survivors, per_arm});
        survivors = (survivors + 1) / 2;
    }
    return schedule;
}

double default_exploration(std::size_t K, std::size_t T, double h_incl)
{
    if (T <= K)
        throw BudgetError("default exploration needs T > K");
    if (!(h_incl > 0.0))
        throw ContractError("complexity must be positive");
    return 25.0 / 36.0 * static_cast<double>(T - K) / h_incl;
}

namespace detail {

void check_budget(const StrategyConfig& config, std::size_t K, std::size_t T)
{
    if (K < 2)
        throw ContractError(std::string(strategy_name(config.kind())) + " needs K >= 2");
    // uniform round-robin is well defined for any positive budget; the others need one pull per arm
    const std::size_t minimum = config.kind() == StrategyKind::uniform ? 1 : K;
    if (T < minimum)
        throw BudgetError("budget T = " + std::to_string(T) + " is below the minimum " + std::to_string(minimum) +
                          " for " + std::string(strategy_name(config.kind())));
}

}  // namespace detail

RunResult run_strategy(const StrategyConfig& config, const BanditInstance& instance, std::size_t T,
                       ArmStreams& streams)
{
    if (streams.arms() != instance.arms())
        throw ContractError("reward streams do not match the instance");
    return play(config, instance.arms(), T, streams);
}

RunResult run_strategy(const StrategyConfig& config, const BanditInstance& instance, std::size_t T,
                       std::uint64_t replication_seed)
{
    ArmStreams streams(instance, replication_seed);
    return play(config, instance.arms(), T, streams);
}

}  // namespace bai
