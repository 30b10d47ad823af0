#include "bai/instance_factory.hpp"

#include <cmath>
#include <string>

#include "bai/errors.hpp"

namespace bai {

FlippedFamily::FlippedFamily(std::vector<double> base_p) : p_(std::move(base_p))
{
    if (p_.size() < 2)
        throw ContractError("a flipped family needs K >= 2 arms");
    if (p_[0] != 0.5)
        throw ContractError("the reference arm of a flipped family must have p = 1/2");
    for (std::size_t k = 1; k < p_.size(); ++k) {
        if (!(p_[k] >= 0.25 && p_[k] < 0.5))
            throw ContractError("family parameter p_" + std::to_string(k + 1) + " = " + std::to_string(p_[k]) +
                                " outside [1/4, 1/2)");
    }
    d_.resize(p_.size());
    for (std::size_t k = 0; k < p_.size(); ++k)
        d_[k] = 0.5 - p_[k];  // exact: p_k in [1/4, 1/2]
}

double FlippedFamily::gap(Arm i, Arm k) const
{
    if (i >= arms() || k >= arms())
        throw ContractError("family arm index out of range");
    return k == i ? d_[i] : d_[i] + d_[k];
}

FlippedFamily make_flipped_family(std::span<const double> p_tail)
{
    std::vector<double> p;
    p.reserve(p_tail.size() + 1);
    p.push_back(0.5);
    p.insert(p.end(), p_tail.begin(), p_tail.end());
    return FlippedFamily(std::move(p));
}

BanditInstance family_instance(const FlippedFamily& family, Arm i)
{
    if (i >= family.arms())
        throw ContractError("problem index " + std::to_string(i) + " out of range");
    std::vector<double> means(family.base_p().begin(), family.base_p().end());
    means[i] = 1.0 - means[i];
    return BanditInstance(std::move(means));
}

FlippedFamily make_alpha_family(std::size_t K, double alpha)
{
    if (K < 2)
        throw ContractError("alpha family needs K >= 2");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw ContractError("alpha must be a finite value >= 0");
    std::vector<double> p(K);
    p[0] = 0.5;
    for (std::size_t k = 2; k <= K; ++k) {
        const double d = 0.25 * std::pow(static_cast<double>(k) / static_cast<double>(K), alpha);
        p[k - 1] = 0.5 - d;
    }
    return FlippedFamily(std::move(p));
}

BanditInstance make_uniform_random_instance(std::size_t K, GapRange gap_range, RngStream& rng)
{
    if (K < 2)
        throw ContractError("random instance needs K >= 2");
    if (!(gap_range.low > 0.0 && gap_range.low <= gap_range.high && gap_range.high <= 0.5))
        throw ContractError("gap range must satisfy 0 < low <= high <= 1/2");
    const Arm best = static_cast<Arm>(rng.next_u64() % K);
    std::vector<double> means(K);
    for (Arm k = 0; k < K; ++k) {
        if (k == best) {
            means[k] = 0.5;
            continue;
        }
        const double g = gap_range.low + (gap_range.high - gap_range.low) * rng.next_unit();
        means[k] = 0.5 - g;
    }
    return BanditInstance(std::move(means));
}

}  // namespace bai
