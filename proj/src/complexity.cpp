#include "bai/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "bai/errors.hpp"

namespace bai {
namespace {

void require_open_unit(double x, const char* name)
{
    if (!(x > 0.0 && x < 1.0))
        throw DomainError(std::string(name) + " = " + std::to_string(x) + " must lie strictly inside (0, 1)");
}

/// Suboptimal gaps sorted ascending, plus the size of the best set.
std::pair<std::vector<double>, std::size_t> sorted_suboptimal_gaps(const BanditInstance& instance)
{
    std::vector<double> sub;
    std::size_t optimal = 0;
    for (const double m : instance.means()) {
        if (m == instance.best_mean())
            ++optimal;
        else
            sub.push_back(instance.best_mean() - m);
    }
    if (sub.empty())
        throw ComplexityError("complexity undefined: every arm is optimal");
    std::sort(sub.begin(), sub.end());
    return {std::move(sub), optimal};
}

}  // namespace

double kl_bernoulli(double p, double q)
{
    require_open_unit(p, "p");
    require_open_unit(q, "q");
    return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

double kl_flip(double p)
{
    require_open_unit(p, "p");
    return (1.0 - 2.0 * p) * std::log((1.0 - p) / p);
}

double complexity_h(const BanditInstance& instance)
{
    const auto [sub, optimal] = sorted_suboptimal_gaps(instance);
    double h = 0.0;
    for (const double g : sub)
        h += 1.0 / (g * g);
    return h;
}

double complexity_h2(const BanditInstance& instance)
{
    const auto [sub, optimal] = sorted_suboptimal_gaps(instance);
    double h2 = 0.0;
    for (std::size_t n = 0; n < sub.size(); ++n) {
        const double rank = static_cast<double>(optimal + n + 1);
        h2 = std::max(h2, rank / (sub[n] * sub[n]));
    }
    return h2;
}

double complexity_h_incl(const BanditInstance& instance)
{
    const auto [sub, optimal] = sorted_suboptimal_gaps(instance);
    if (optimal != 1)
        throw ComplexityError("inclusive complexity is ambiguous with " + std::to_string(optimal) +
                              " tied best arms");
    double h = 1.0 / (sub.front() * sub.front());
    for (const double g : sub)
        h += 1.0 / (g * g);
    return h;
}

ComplexityReport complexity_report(const BanditInstance& instance)
{
    ComplexityReport r;
    r.h_excl = complexity_h(instance);
    r.h2 = complexity_h2(instance);
    if (best_arm_set(instance).size() == 1)
        r.h_incl = complexity_h_incl(instance);
    r.gaps = gaps(instance);
    return r;
}

FamilyComplexities family_complexities(const FlippedFamily& family)
{
    const std::size_t K = family.arms();
    FamilyComplexities fc;
    fc.h.assign(K, 0.0);
    for (Arm i = 0; i < K; ++i) {
        for (Arm k = 0; k < K; ++k) {
            if (k == i)
                continue;
            const double g = family.d(i) + family.d(k);
            fc.h[i] += 1.0 / (g * g);
        }
    }
    fc.h_star = 0.0;
    for (Arm k = 1; k < K; ++k)
        fc.h_star += 1.0 / (family.d(k) * family.d(k) * fc.h[k]);
    return fc;
}

}  // namespace bai
