#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bai/complexity.hpp"
#include "bai/instance_factory.hpp"
#include "bai/strategies.hpp"

namespace bai {

/// A probability bound in natural-log domain.
struct BoundValue {
    std::string name;
    double log_value = 0.0;
    bool valid = true;     ///< side condition satisfied at the evaluated point
    bool vacuous = false;  ///< upper bound clamped at probability 1
    std::string side_condition;
};

struct LowerBoundInputs {
    std::size_t budget = 0;
    std::size_t arms = 0;
    double a = 0.0;             ///< complexity cap of the problem class
    double h_of_problem = 0.0;  ///< complexity of the witness problem
    double h1 = 0.0;            ///< hardest complexity of the family, max_i H(i)
    double h_i = 0.0;           ///< complexity H(i) of the problem the second display is read at
    double h_star = 0.0;
};

/// Individual bound evaluators, natural-log domain. Formulas are listed with eval_lower_bounds
/// and eval_upper_bounds, which compose them.
BoundValue bound_thm1_a(std::size_t budget, std::size_t arms, double a);
BoundValue bound_thm1_adapt(std::size_t budget, std::size_t arms, double a, double h_of_problem);
BoundValue bound_thm2_first(std::size_t budget, std::size_t arms, double h1);
BoundValue bound_thm2_second(std::size_t budget, std::size_t arms, double h_i, double h_star);
BoundValue bound_known_a(std::size_t budget, std::size_t arms, double a);
BoundValue bound_sr(std::size_t budget, std::size_t arms, double h2);

/**
 * Lower bounds on the worst-case misidentification probability, log domain.
 *
 * Returns, in order:
 *   lb_thm1_a      log(1/6) - 120 T / a, valid when T >= a^2 4 log(6TK) / 60^2
 *   lb_thm1_adapt  log(1/6) - 400 T / (log(K) H), valid when additionally a >= 11 K^2
 *   lb_thm2_first  log(1/6) - 60 T / H(1) - 2 sqrt(T log(6TK))
 *   lb_thm2_second log(1/6) - 60 T / (H(i) h*) - 2 sqrt(T log(6TK))
 */
std::vector<BoundValue> eval_lower_bounds(const LowerBoundInputs& in);

/// ub_known_a = log(2TK) - (T - K)/(18 a) and ub_sr = log(K(K-1)/2) - (T - K)/(log(2K) H2),
/// both clamped at 0. Requires T > K.
std::vector<BoundValue> eval_upper_bounds(std::size_t budget, std::size_t arms, double a, double h2);

/**
 * All bound curves for the worst case over the problems of `family`.
 *
 * Lower bounds read the second display at min_{i>=2} H(i) and use a = H(1),
 * so each value bounds max_i P_i from below. Upper bounds use a = H(1) and
 * the largest H2 over the family, so each value bounds max_i P_i from above.
 */
std::vector<BoundValue> family_bound_curves(const FlippedFamily& family, std::size_t budget);

enum class AlphaBranch { below_half, half, above_half };

struct AlphaRegime {
    double h1_exact;
    double prediction;  ///< K/(1-2a), K log K or K^{2a}/(2a-1)
    double ratio;       ///< h1_exact / prediction
    AlphaBranch branch;
};

AlphaRegime alpha_regime(std::size_t K, double alpha);

/// log(dnu/dnu')(x) for nu = Bernoulli(p), nu' = Bernoulli(1 - p).
double log_likelihood_ratio(int reward, double p);

struct KlTrace {
    double reference;            ///< KL(nu, nu') for the arm
    std::vector<double> running; ///< running[t-1] = empirical KL after t samples
    std::vector<double> radius;  ///< radius[t-1] = 2 sqrt(log(6 T K) / t)
};

/// Running empirical KL of one arm's rewards with horizon T = rewards.size().
/// p must lie in [1/4, 1/2]; p = 1/2 is the unflipped reference arm.
KlTrace empirical_kl_trace(std::span<const int> rewards, double p, std::size_t arms);

/// True when every |running| - reference stays within the radius.
bool kl_trace_within_radius(const KlTrace& trace);

struct XiEstimate {
    std::size_t replications;
    std::size_t holds;
    double frequency;
};

/// Frequency over R full reward tables drawn under problem i with which the
/// concentration event holds for every arm and every t <= T.
XiEstimate verify_xi(const FlippedFamily& family, Arm i, std::size_t T, std::size_t R, std::uint64_t master_seed,
                     unsigned workers = 1);

enum class MeasureEvent { recommend_reference, whole_space };

struct ChangeOfMeasureResult {
    double lhs;  ///< P_i(event), exact
    double rhs;  ///< E_0[1{event} exp(-T_i KLhat_{i,T_i})], exact
    double abs_diff;
    std::size_t leaves;  ///< distinct observation paths enumerated
};

/// Exhaustive check of the likelihood-ratio identity between problem 0 and
/// problem i, enumerating every observation path of the strategy.
/// Requires K <= 4 and T <= 16 (EnumerationLimitError otherwise).
ChangeOfMeasureResult verify_change_of_measure(const FlippedFamily& family, Arm i, const StrategyConfig& config,
                                               std::size_t T,
                                               MeasureEvent event = MeasureEvent::recommend_reference);

struct MarkovEstimate {
    std::vector<double> expected_pulls;  ///< estimated from the first half
    std::vector<double> frequency;       ///< P(T_k >= 6 t_k) measured on the second half
    std::size_t sample_size;             ///< replications in the second half
};

/**
 * Seed-split check of the Markov step under problem 0.
 *
 * Replications [0, R/2) estimate t_k = E T_k; replications [R/2, R) measure
 * the frequency of T_k >= 6 t_k. `swap_halves` exchanges the roles. An arm with
 * zero estimated pulls satisfies the event in every run.
 */
MarkovEstimate verify_markov_step(const StrategyConfig& config, const FlippedFamily& family, std::size_t T,
                                  std::size_t R, std::uint64_t master_seed, bool swap_halves = false,
                                  unsigned workers = 1);

struct PigeonholeWitness {
    std::optional<Arm> by_h1;      ///< some i >= 1 with t_i <= T / (H(0) d_i^2)
    std::optional<Arm> by_h_star;  ///< some i >= 1 with t_i <= T / (h* d_i^2 H(i))
};

/// Searches the allocation for the indices whose existence the pigeonhole
/// argument guarantees whenever sum_k t_k <= T.
PigeonholeWitness pigeonhole_witness(const FlippedFamily& family, const FamilyComplexities& complexities,
                                     std::span<const double> allocation, double budget);

}  // namespace bai
