#include "bai/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <json.hpp>

#include "bai/errors.hpp"

namespace bai {

BanditInstance::BanditInstance(std::vector<double> means) : means_(std::move(means)), best_(0.0)
{
    if (means_.empty())
        throw ContractError("a bandit instance needs at least one arm");
    for (const double m : means_) {
        if (!(m >= 0.0 && m <= 1.0))
            throw ContractError("arm mean " + std::to_string(m) + " outside [0, 1]");
    }
    best_ = *std::max_element(means_.begin(), means_.end());
}

double BanditInstance::mean(Arm k) const
{
    if (k >= means_.size())
        throw ContractError("arm index " + std::to_string(k) + " out of range");
    return means_[k];
}

BanditInstance parse_instance_literal(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("instance literal is not valid JSON: ") + e.what());
    }
    if (!j.is_array())
        throw ValidationError("instance literal must be a JSON array of means");
    std::vector<double> means;
    for (const auto& v : j) {
        if (!v.is_number())
            throw ValidationError("instance literal entries must be numbers");
        means.push_back(v.get<double>());
    }
    return BanditInstance(std::move(means));
}

int sample_arm(const BanditInstance& instance, Arm k, RngStream& rng)
{
    return rng.bernoulli(instance.mean(k));
}

std::vector<Arm> best_arm_set(const BanditInstance& instance)
{
    std::vector<Arm> best;
    for (Arm k = 0; k < instance.arms(); ++k) {
        if (instance.means()[k] == instance.best_mean())
            best.push_back(k);
    }
    return best;
}

std::vector<double> gaps(const BanditInstance& instance)
{
    std::vector<double> g(instance.arms());
    for (Arm k = 0; k < instance.arms(); ++k)
        g[k] = instance.best_mean() - instance.means()[k];
    return g;
}

std::size_t RunResult::total_pulls() const noexcept
{
    return std::accumulate(pulls.begin(), pulls.end(), std::size_t{0});
}

ArmStreams::ArmStreams(const BanditInstance& instance, std::uint64_t replication_seed) : means_(instance.means())
{
    streams_.reserve(instance.arms());
    for (Arm k = 0; k < instance.arms(); ++k)
        streams_.emplace_back(replication_seed, k);
}

}  // namespace bai
