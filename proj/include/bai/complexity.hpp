#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bai/bandit.hpp"
#include "bai/instance_factory.hpp"

namespace bai {

/// KL(Bernoulli(p) || Bernoulli(q)) in nats. Both arguments must lie strictly inside (0, 1).
double kl_bernoulli(double p, double q);

/// KL between Bernoulli(p) and Bernoulli(1 - p): (1 - 2p) log((1 - p) / p).
double kl_flip(double p);

/// Sum over suboptimal arms of 1 / gap^2. Throws ComplexityError if every arm is optimal.
double complexity_h(const BanditInstance& instance);

/// max over k > |best set| of k / gap_(k)^2 with gaps sorted ascending (k is 1-based).
double complexity_h2(const BanditInstance& instance);

/// Sum over all arms of 1 / gap^2, the best arm taking the smallest suboptimal gap.
/// Requires a unique best arm (ComplexityError otherwise).
double complexity_h_incl(const BanditInstance& instance);

struct ComplexityReport {
    double h_excl;
    double h2;
    std::optional<double> h_incl;  ///< empty when the best arm is not unique
    std::vector<double> gaps;
};

ComplexityReport complexity_report(const BanditInstance& instance);

struct FamilyComplexities {
    std::vector<double> h;  ///< h[i] = complexity of problem i
    double h_star;          ///< sum over k >= 1 (0-based) of 1 / (d_k^2 h[k])
};

FamilyComplexities family_complexities(const FlippedFamily& family);

}  // namespace bai
