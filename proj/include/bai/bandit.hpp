#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bai/rng.hpp"

namespace bai {

/// Arm indices are 0-based throughout the library; CLI and file output label arms from 1.
using Arm = std::size_t;

/// Bernoulli bandit: one mean in [0, 1] per arm. Immutable after construction.
class BanditInstance {
public:
    explicit BanditInstance(std::vector<double> means);

    std::size_t arms() const noexcept { return means_.size(); }
    double mean(Arm k) const;
    std::span<const double> means() const noexcept { return means_; }
    double best_mean() const noexcept { return best_; }

private:
    std::vector<double> means_;
    double best_;
};

/// Parses the instance literal format, a JSON array of means such as "[0.5, 0.4, 0.3]".
BanditInstance parse_instance_literal(std::string_view text);

/// One Bernoulli(means[k]) draw from `rng`. Throws ContractError for k >= K.
int sample_arm(const BanditInstance& instance, Arm k, RngStream& rng);

/// Arms attaining the maximum mean, by exact comparison of the stored values. Sorted ascending.
std::vector<Arm> best_arm_set(const BanditInstance& instance);

/// mu* - mu_k for every arm.
std::vector<double> gaps(const BanditInstance& instance);

/// Outcome of one fixed-budget game.
struct RunResult {
    Arm recommended = 0;
    std::vector<std::size_t> pulls;
    std::vector<double> empirical_means;  ///< 0 for arms never pulled
    std::vector<Arm> eliminated;          ///< elimination order (successive rejects/halving only)
    bool tie_broken = false;              ///< some decision was settled by the index tie rule

    std::size_t total_pulls() const noexcept;
    friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Reward tables backed by per-arm streams: arm k reads stream k of `replication_seed`.
class ArmStreams {
public:
    ArmStreams(const BanditInstance& instance, std::uint64_t replication_seed);

    int draw(Arm k) { return streams_[k].bernoulli(means_[k]); }
    std::size_t arms() const noexcept { return streams_.size(); }

private:
    std::span<const double> means_;
    std::vector<RngStream> streams_;
};

}  // namespace bai
