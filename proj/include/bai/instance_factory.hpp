#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bai/bandit.hpp"
#include "bai/rng.hpp"

namespace bai {

/**
 * Flipped Bernoulli family.
 *
 * Base parameters p_0 = 1/2 and p_k in [1/4, 1/2) for k >= 1, with offsets
 * d_k = 1/2 - p_k. Problem i keeps every arm at Bernoulli(p_k) except arm i,
 * which is flipped to Bernoulli(1 - p_i) and becomes the unique best arm with
 * gaps d_i + d_k to every other arm k.
 */
class FlippedFamily {
public:
    /// Validates p_0 = 1/2 and p_k in [1/4, 1/2) for k >= 1. Throws ContractError.
    explicit FlippedFamily(std::vector<double> base_p);

    std::size_t arms() const noexcept { return p_.size(); }
    std::span<const double> base_p() const noexcept { return p_; }
    std::span<const double> offsets() const noexcept { return d_; }
    double p(Arm k) const { return p_.at(k); }
    double d(Arm k) const { return d_.at(k); }

    /// Gap of arm k in problem i (d_i for k == i).
    double gap(Arm i, Arm k) const;

private:
    std::vector<double> p_;
    std::vector<double> d_;
};

/// Family with p_0 = 1/2 prepended to `p_tail`. Throws ContractError if any entry is outside [1/4, 1/2).
FlippedFamily make_flipped_family(std::span<const double> p_tail);

/// Problem i of the family: means p_k except arm i at 1 - p_i.
BanditInstance family_instance(const FlippedFamily& family, Arm i);

/// d_k = (1/4) (k/K)^alpha for 1-based k = 2..K.
FlippedFamily make_alpha_family(std::size_t K, double alpha);

struct GapRange {
    double low;
    double high;
};

/// One optimal arm at 1/2 in a uniformly drawn position; other means 1/2 - g with g ~ U[low, high].
BanditInstance make_uniform_random_instance(std::size_t K, GapRange gap_range, RngStream& rng);

}  // namespace bai
