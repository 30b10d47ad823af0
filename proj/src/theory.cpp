#include "bai/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bai/errors.hpp"
#include "bai/simulator.hpp"

namespace bai {
namespace {

const double kLogSixth = std::log(1.0 / 6.0);

void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw ContractError(std::string(name) + " must be a finite positive number");
}

double log_6tk(std::size_t T, std::size_t K)
{
    return std::log(6.0 * static_cast<double>(T) * static_cast<double>(K));
}

BoundValue upper_bound(std::string name, double raw, std::string side)
{
    BoundValue b;
    b.name = std::move(name);
    b.vacuous = raw >= 0.0;
    b.log_value = std::min(raw, 0.0);
    b.side_condition = std::move(side);
    return b;
}

/// Thrown by ReplayOracle when the strategy asks for a reward past the end of the path.
struct NeedReward {
    Arm arm;
};

class ReplayOracle {
public:
    explicit ReplayOracle(const std::vector<int>& path) : path_(path) {}

    int draw(Arm k)
    {
        if (pos_ == path_.size())
            throw NeedReward{k};
        return path_[pos_++];
    }

private:
    const std::vector<int>& path_;
    std::size_t pos_ = 0;
};

struct Enumeration {
    const StrategyConfig& config;
    std::size_t arms;
    std::size_t budget;
    Arm flipped;
    double flipped_p;
    std::span<const double> reference_means;
    std::span<const double> flipped_means;
    MeasureEvent event;

    double lhs = 0.0;
    double rhs = 0.0;
    std::size_t leaves = 0;
    std::vector<int> path;

    void explore(double prob_reference, double prob_flipped, double llr_sum)
    {
        ReplayOracle oracle(path);
        Arm requested = 0;
        try {
            const RunResult r = play(config, arms, budget, oracle);
            ++leaves;
            const bool in_event = event == MeasureEvent::whole_space || r.recommended == 0;
            if (in_event) {
                lhs += prob_flipped;
                rhs += prob_reference * std::exp(-llr_sum);
            }
            return;
        } catch (const NeedReward& need) {
            requested = need.arm;
        }
        for (const int x : {0, 1}) {
            const double p0 = x == 1 ? reference_means[requested] : 1.0 - reference_means[requested];
            const double pi = x == 1 ? flipped_means[requested] : 1.0 - flipped_means[requested];
            const double llr = requested == flipped ? log_likelihood_ratio(x, flipped_p) : 0.0;
            path.push_back(x);
            explore(prob_reference * p0, prob_flipped * pi, llr_sum + llr);
            path.pop_back();
        }
    }
};

void require_lower_inputs(std::size_t budget, std::size_t arms)
{
    if (arms < 2)
        throw ContractError("bounds need K >= 2");
    if (budget == 0)
        throw ContractError("bounds need T >= 1");
}

double deviation_term(std::size_t budget, std::size_t arms)
{
    return 2.0 * std::sqrt(static_cast<double>(budget) * log_6tk(budget, arms));
}

bool thm1_budget_condition(std::size_t budget, std::size_t arms, double a)
{
    return static_cast<double>(budget) >= a * a * 4.0 * log_6tk(budget, arms) / 3600.0;
}

}  // namespace

BoundValue bound_thm1_a(std::size_t budget, std::size_t arms, double a)
{
    require_lower_inputs(budget, arms);
    require_positive(a, "a");
    const double T = static_cast<double>(budget);
    return {"lb_thm1_a", kLogSixth - 120.0 * T / a, thm1_budget_condition(budget, arms, a), false,
            "T >= a^2 * 4 log(6TK) / 60^2"};
}

BoundValue bound_thm1_adapt(std::size_t budget, std::size_t arms, double a, double h_of_problem)
{
    require_lower_inputs(budget, arms);
    require_positive(a, "a");
    require_positive(h_of_problem, "H(G)");
    const double T = static_cast<double>(budget);
    const double K = static_cast<double>(arms);
    return {"lb_thm1_adapt", kLogSixth - 400.0 * T / (std::log(K) * h_of_problem),
            thm1_budget_condition(budget, arms, a) && a >= 11.0 * K * K, false,
            "T >= a^2 * 4 log(6TK) / 60^2 and a >= 11 K^2"};
}

BoundValue bound_thm2_first(std::size_t budget, std::size_t arms, double h1)
{
    require_lower_inputs(budget, arms);
    require_positive(h1, "H(1)");
    const double T = static_cast<double>(budget);
    return {"lb_thm2_first", kLogSixth - 60.0 * T / h1 - deviation_term(budget, arms), true, false, "none"};
}

BoundValue bound_thm2_second(std::size_t budget, std::size_t arms, double h_i, double h_star)
{
    require_lower_inputs(budget, arms);
    require_positive(h_i, "H(i)");
    require_positive(h_star, "h*");
    const double T = static_cast<double>(budget);
    return {"lb_thm2_second", kLogSixth - 60.0 * T / (h_i * h_star) - deviation_term(budget, arms), true, false,
            "none"};
}

BoundValue bound_known_a(std::size_t budget, std::size_t arms, double a)
{
    if (arms < 2)
        throw ContractError("bounds need K >= 2");
    if (budget <= arms)
        throw BudgetError("upper bounds need T > K");
    require_positive(a, "a");
    const double T = static_cast<double>(budget);
    const double K = static_cast<double>(arms);
    return upper_bound("ub_known_a", std::log(2.0 * T * K) - (T - K) / (18.0 * a), "a >= H");
}

BoundValue bound_sr(std::size_t budget, std::size_t arms, double h2)
{
    if (arms < 2)
        throw ContractError("bounds need K >= 2");
    if (budget <= arms)
        throw BudgetError("upper bounds need T > K");
    require_positive(h2, "H2");
    const double T = static_cast<double>(budget);
    const double K = static_cast<double>(arms);
    return upper_bound("ub_sr", std::log(K * (K - 1.0) / 2.0) - (T - K) / (std::log(2.0 * K) * h2), "none");
}

std::vector<BoundValue> eval_lower_bounds(const LowerBoundInputs& in)
{
    return {bound_thm1_a(in.budget, in.arms, in.a), bound_thm1_adapt(in.budget, in.arms, in.a, in.h_of_problem),
            bound_thm2_first(in.budget, in.arms, in.h1), bound_thm2_second(in.budget, in.arms, in.h_i, in.h_star)};
}

std::vector<BoundValue> eval_upper_bounds(std::size_t budget, std::size_t arms, double a, double h2)
{
    return {bound_known_a(budget, arms, a), bound_sr(budget, arms, h2)};
}

std::vector<BoundValue> family_bound_curves(const FlippedFamily& family, std::size_t budget)
{
    const std::size_t K = family.arms();
    const FamilyComplexities fc = family_complexities(family);
    const double h1 = fc.h[0];
    const double h_min = *std::min_element(fc.h.begin() + 1, fc.h.end());

    LowerBoundInputs in;
    in.budget = budget;
    in.arms = K;
    in.a = h1;
    in.h_of_problem = h_min;
    in.h1 = h1;
    in.h_i = h_min;
    in.h_star = fc.h_star;
    auto curves = eval_lower_bounds(in);

    if (budget > K) {
        double h2 = 0.0;
        for (Arm i = 0; i < K; ++i)
            h2 = std::max(h2, complexity_h2(family_instance(family, i)));
        for (auto& b : eval_upper_bounds(budget, K, h1, h2))
            curves.push_back(std::move(b));
    } else {
        curves.push_back(upper_bound("ub_known_a", 0.0, "a >= H"));
        curves.push_back(upper_bound("ub_sr", 0.0, "none"));
    }
    return curves;
}

AlphaRegime alpha_regime(std::size_t K, double alpha)
{
    const FlippedFamily family = make_alpha_family(K, alpha);
    double h1 = 0.0;
    for (Arm k = 1; k < K; ++k)
        h1 += 1.0 / (family.d(k) * family.d(k));

    const double k = static_cast<double>(K);
    AlphaRegime r{};
    r.h1_exact = h1;
    if (alpha < 0.5) {
        r.branch = AlphaBranch::below_half;
        r.prediction = k / (1.0 - 2.0 * alpha);
    } else if (alpha == 0.5) {
        r.branch = AlphaBranch::half;
        r.prediction = k * std::log(k);
    } else {
        r.branch = AlphaBranch::above_half;
        r.prediction = std::pow(k, 2.0 * alpha) / (2.0 * alpha - 1.0);
    }
    r.ratio = h1 / r.prediction;
    return r;
}

double log_likelihood_ratio(int reward, double p)
{
    return reward == 1 ? std::log(p / (1.0 - p)) : std::log((1.0 - p) / p);
}

KlTrace empirical_kl_trace(std::span<const int> rewards, double p, std::size_t arms)
{
    if (!(p >= 0.25 && p <= 0.5))
        throw ContractError("empirical KL trace needs p in [1/4, 1/2]");
    if (rewards.empty())
        throw ContractError("empirical KL trace needs at least one reward");
    if (arms == 0)
        throw ContractError("empirical KL trace needs K >= 1");
    const std::size_t T = rewards.size();
    const double l6tk = log_6tk(T, arms);
    KlTrace trace;
    trace.reference = p == 0.5 ? 0.0 : kl_flip(p);
    trace.running.resize(T);
    trace.radius.resize(T);
    double sum = 0.0;
    for (std::size_t t = 1; t <= T; ++t) {
        sum += log_likelihood_ratio(rewards[t - 1], p);
        trace.running[t - 1] = sum / static_cast<double>(t);
        trace.radius[t - 1] = 2.0 * std::sqrt(l6tk / static_cast<double>(t));
    }
    return trace;
}

bool kl_trace_within_radius(const KlTrace& trace)
{
    for (std::size_t t = 0; t < trace.running.size(); ++t) {
        if (std::abs(trace.running[t]) - trace.reference > trace.radius[t])
            return false;
    }
    return true;
}

XiEstimate verify_xi(const FlippedFamily& family, Arm i, std::size_t T, std::size_t R, std::uint64_t master_seed,
                     unsigned workers)
{
    if (T == 0 || R == 0)
        throw ContractError("verify_xi needs T >= 1 and R >= 1");
    const BanditInstance problem = family_instance(family, i);
    const std::size_t K = family.arms();
    const double l6tk = log_6tk(T, K);
    std::vector<double> radius(T);
    for (std::size_t t = 1; t <= T; ++t)
        radius[t - 1] = 2.0 * std::sqrt(l6tk / static_cast<double>(t));
    std::vector<double> reference(K), llr_one(K), llr_zero(K);
    for (Arm k = 0; k < K; ++k) {
        const double p = family.p(k);
        reference[k] = k == 0 ? 0.0 : kl_flip(p);
        llr_one[k] = log_likelihood_ratio(1, p);
        llr_zero[k] = log_likelihood_ratio(0, p);
    }

    constexpr std::size_t chunk = 256;
    std::vector<std::size_t> holds((R + chunk - 1) / chunk, 0);
    parallel_for(holds.size(), workers, [&](std::size_t c) {
        const std::size_t end = std::min(R, (c + 1) * chunk);
        for (std::size_t r = c * chunk; r < end; ++r) {
            ArmStreams streams(problem, derive_stream_seed(master_seed, r));
            bool ok = true;
            for (Arm k = 0; k < K; ++k) {
                // draw the whole row even after a violation so stream use is uniform
                double sum = 0.0;
                for (std::size_t t = 1; t <= T; ++t) {
                    sum += streams.draw(k) == 1 ? llr_one[k] : llr_zero[k];
                    if (std::abs(sum / static_cast<double>(t)) - reference[k] > radius[t - 1])
                        ok = false;
                }
            }
            if (ok)
                ++holds[c];
        }
    });
    XiEstimate e;
    e.replications = R;
    e.holds = std::accumulate(holds.begin(), holds.end(), std::size_t{0});
    e.frequency = static_cast<double>(e.holds) / static_cast<double>(R);
    return e;
}

ChangeOfMeasureResult verify_change_of_measure(const FlippedFamily& family, Arm i, const StrategyConfig& config,
                                               std::size_t T, MeasureEvent event)
{
    const std::size_t K = family.arms();
    if (K > 4 || T > 16)
        throw EnumerationLimitError("exhaustive enumeration is limited to K <= 4 and T <= 16");
    if (i >= K)
        throw ContractError("problem index out of range");
    detail::check_budget(config, K, T);
    const BanditInstance reference = family_instance(family, 0);
    const BanditInstance flipped = family_instance(family, i);

    Enumeration e{config, K, T, i, family.p(i), reference.means(), flipped.means(), event, 0.0, 0.0, 0, {}};
    e.path.reserve(T);
    e.explore(1.0, 1.0, 0.0);
    return {e.lhs, e.rhs, std::abs(e.lhs - e.rhs), e.leaves};
}

MarkovEstimate verify_markov_step(const StrategyConfig& config, const FlippedFamily& family, std::size_t T,
                                  std::size_t R, std::uint64_t master_seed, bool swap_halves, unsigned workers)
{
    if (R < 2)
        throw ContractError("verify_markov_step needs R >= 2");
    const BanditInstance problem = family_instance(family, 0);
    const std::size_t K = family.arms();
    const std::size_t half = R / 2;
    ReplicationBlock estimate_block{master_seed, 0, half};
    ReplicationBlock measure_block{master_seed, half, R - half};
    if (swap_halves)
        std::swap(estimate_block, measure_block);

    MarkovEstimate m;
    m.expected_pulls = mean_allocation(config, problem, T, estimate_block, workers);
    const auto runs = simulate_runs(config, problem, T, measure_block, workers);
    m.sample_size = runs.size();
    m.frequency.assign(K, 0.0);
    for (Arm k = 0; k < K; ++k) {
        std::size_t hits = 0;
        for (const RunResult& r : runs) {
            if (static_cast<double>(r.pulls[k]) >= 6.0 * m.expected_pulls[k])
                ++hits;
        }
        m.frequency[k] = static_cast<double>(hits) / static_cast<double>(runs.size());
    }
    return m;
}

PigeonholeWitness pigeonhole_witness(const FlippedFamily& family, const FamilyComplexities& complexities,
                                     std::span<const double> allocation, double budget)
{
    const std::size_t K = family.arms();
    if (allocation.size() != K || complexities.h.size() != K)
        throw ContractError("allocation size must match the family");
    const double total = std::accumulate(allocation.begin(), allocation.end(), 0.0);
    if (total > budget * (1.0 + 1e-12))
        throw ContractError("allocation exceeds the budget");
    PigeonholeWitness w;
    for (Arm i = 1; i < K; ++i) {
        const double d2 = family.d(i) * family.d(i);
        if (!w.by_h1 && allocation[i] <= budget / (complexities.h[0] * d2))
            w.by_h1 = i;
        if (!w.by_h_star && allocation[i] <= budget / (complexities.h_star * d2 * complexities.h[i]))
            w.by_h_star = i;
    }
    return w;
}

}  // namespace bai
