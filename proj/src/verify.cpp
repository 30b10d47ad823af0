#include "bai/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "bai/complexity.hpp"
#include "bai/errors.hpp"
#include "bai/instance_factory.hpp"
#include "bai/simulator.hpp"
#include "bai/theory.hpp"

namespace bai {
namespace {

constexpr std::array<std::string_view, 8> kSuites = {"kl",    "chain",  "witness",    "com",
                                                     "xi",    "markov", "pigeonhole", "all"};

CheckReport check(std::string name, bool ok, double lhs, double rhs, double tolerance,
                  std::vector<std::uint64_t> seeds = {})
{
    return {std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, lhs, rhs, tolerance, std::move(seeds)};
}

std::vector<StrategyConfig> all_strategies(const FlippedFamily& family, std::size_t T)
{
    const double h_incl = complexity_h_incl(family_instance(family, 0));
    return {StrategyConfig::uniform(), StrategyConfig::successive_rejects(), StrategyConfig::successive_halving(),
            StrategyConfig::ucb_e(default_exploration(family.arms(), T, h_incl))};
}

void suite_kl(std::vector<CheckReport>& out)
{
    double worst = -1.0;
    for (int n = 0; n < 2500; ++n) {
        const double p = 0.25 + n * 1e-4;
        worst = std::max(worst, kl_flip(p) - 10.0 * (0.5 - p) * (0.5 - p));
    }
    out.push_back(check("kl_flip_le_10_d2", worst <= 0.0, worst, 0.0, 0.0));
}

void suite_chain(std::vector<CheckReport>& out, std::uint64_t seed)
{
    RngStream rng(seed, 0);
    double worst = -1.0;
    for (int n = 0; n < 1000; ++n) {
        const std::size_t K = 2 + static_cast<std::size_t>(rng.next_u64() % 49);
        const BanditInstance inst = make_uniform_random_instance(K, {0.01, 0.5}, rng);
        const double h2 = complexity_h2(inst);
        const double h_incl = complexity_h_incl(inst);
        worst = std::max({worst, h2 / h_incl - 1.0, h_incl / (std::log(2.0 * static_cast<double>(K)) * h2) - 1.0});
    }
    out.push_back(check("h2_le_h_incl_le_log2K_h2", worst <= 0.0, worst, 0.0, 0.0, {seed}));

    const BanditInstance counterexample({0.5, 0.4, 0.3});
    const double h = complexity_h(counterexample);
    const double h2 = complexity_h2(counterexample);
    out.push_back(check("exclusive_h_below_h2_counterexample", h < h2, h, h2, 0.0));
}

void suite_witness(std::vector<CheckReport>& out)
{
    std::vector<std::size_t> ks = {3};
    for (std::size_t K = 4; K <= 1024; K *= 2)
        ks.push_back(K);
    double cap = 0.0, local = 0.0, h_star_margin = INFINITY, max_gap = 0.0;
    for (const std::size_t K : ks) {
        const FlippedFamily family = make_alpha_family(K, 1.0);
        const FamilyComplexities fc = family_complexities(family);
        const double k = static_cast<double>(K);
        cap = std::max(cap, fc.h[0] / (11.0 * k * k));
        for (Arm i = 1; i < K; ++i)
            local = std::max(local, family.d(i) * family.d(i) * fc.h[i] / (2.0 * static_cast<double>(i + 1)));
        h_star_margin = std::min(h_star_margin, fc.h_star / (0.3 * std::log(k)));
        const double hmax = *std::max_element(fc.h.begin(), fc.h.end());
        max_gap = std::max(max_gap, std::abs(fc.h[0] - hmax) / fc.h[0]);
    }
    out.push_back(check("h1_le_11K2", cap <= 1.0 + 1e-9, cap, 1.0, 1e-9));
    out.push_back(check("d2_h_le_2i", local <= 1.0 + 1e-9, local, 1.0, 1e-9));
    out.push_back(check("h_star_ge_0.3_logK", h_star_margin >= 1.0 - 1e-9, h_star_margin, 1.0, 1e-9));
    out.push_back(check("h1_is_max", max_gap <= 1e-9, max_gap, 0.0, 1e-9));
}

void com_check(std::vector<CheckReport>& out, const FlippedFamily& family, const StrategyConfig& config,
               std::size_t T)
{
    for (Arm i = 0; i < family.arms(); ++i) {
        const auto r = verify_change_of_measure(family, i, config, T);
        const std::string name = "com/" + std::string(strategy_name(config.kind())) + "/K" +
                                 std::to_string(family.arms()) + "/T" + std::to_string(T) + "/i" +
                                 std::to_string(i + 1);
        out.push_back(check(name, r.abs_diff <= 1e-12 * r.lhs, r.lhs, r.rhs, 1e-12));
    }
}

void suite_com(std::vector<CheckReport>& out)
{
    const std::array<double, 1> tail2 = {0.25};
    const std::array<double, 2> tail3 = {0.25, 0.375};
    const auto k2 = make_flipped_family(tail2);
    const auto k3 = make_flipped_family(tail3);
    for (std::size_t T = 1; T <= 8; ++T)
        com_check(out, k2, StrategyConfig::uniform(), T);
    com_check(out, k3, StrategyConfig::successive_rejects(), 6);
    com_check(out, k3, StrategyConfig::successive_halving(), 6);
    com_check(out, k3, StrategyConfig::ucb_e(1.0), 6);
}

void suite_xi(std::vector<CheckReport>& out, std::uint64_t seed, unsigned workers)
{
    const FlippedFamily family = make_alpha_family(5, 1.0);
    constexpr std::size_t R = 10000;
    const double floor = 5.0 / 6.0 - 3.0 * std::sqrt(0.14 / R);
    for (Arm i = 0; i < family.arms(); ++i) {
        const std::uint64_t s = derive_stream_seed(seed, i);
        const auto e = verify_xi(family, i, 200, R, s, workers);
        out.push_back(check("xi/i" + std::to_string(i + 1), e.frequency >= floor, e.frequency, floor,
                            3.0 * std::sqrt(0.14 / R), {s}));
    }
}

void suite_markov(std::vector<CheckReport>& out, std::uint64_t seed, unsigned workers)
{
    const FlippedFamily family = make_alpha_family(5, 1.0);
    constexpr std::size_t T = 500;
    constexpr std::size_t R = 20000;
    for (const auto& config : all_strategies(family, T)) {
        const auto m = verify_markov_step(config, family, T, R, seed, false, workers);
        const double se = std::sqrt((1.0 / 6.0) * (5.0 / 6.0) / static_cast<double>(m.sample_size));
        const double worst = *std::max_element(m.frequency.begin(), m.frequency.end());
        out.push_back(check("markov/" + std::string(strategy_name(config.kind())), worst <= 1.0 / 6.0 + 3.0 * se,
                            worst, 1.0 / 6.0 + 3.0 * se, 3.0 * se, {seed}));
    }
}

void suite_pigeonhole(std::vector<CheckReport>& out, std::uint64_t seed, unsigned workers)
{
    const FlippedFamily family = make_alpha_family(8, 1.0);
    const FamilyComplexities fc = family_complexities(family);
    RngStream rng(seed, 1);
    std::size_t violations = 0;
    for (int n = 0; n < 10000; ++n) {
        const double T = 1000.0;
        std::vector<double> w(family.arms());
        for (double& x : w)
            x = -std::log1p(-rng.next_unit());
        double sum = 0.0;
        for (const double x : w)
            sum += x;
        for (double& x : w)
            x *= T / sum;
        const auto witness = pigeonhole_witness(family, fc, w, T * (1.0 + 1e-12));
        if (!witness.by_h1 || !witness.by_h_star)
            ++violations;
    }
    out.push_back(check("pigeonhole/random", violations == 0, static_cast<double>(violations), 0.0, 0.0, {seed}));

    const BanditInstance reference = family_instance(family, 0);
    for (const std::size_t T : {200, 400, 800}) {
        for (const auto& config : all_strategies(family, T)) {
            const auto alloc = mean_allocation(config, reference, T, {seed, 0, 1000}, workers);
            const auto witness = pigeonhole_witness(family, fc, alloc, static_cast<double>(T));
            const double found = (witness.by_h1 ? 1.0 : 0.0) + (witness.by_h_star ? 1.0 : 0.0);
            out.push_back(check("pigeonhole/" + std::string(strategy_name(config.kind())) + "/T" + std::to_string(T),
                                found == 2.0, found, 2.0, 0.0, {seed}));
        }
    }
}

std::string_view status_name(CheckStatus s)
{
    switch (s) {
    case CheckStatus::pass:
        return "pass";
    case CheckStatus::fail:
        return "fail";
    case CheckStatus::vacuous:
        return "vacuous";
    }
    return "fail";
}

}  // namespace

std::span<const std::string_view> suite_names() noexcept { return kSuites; }

std::vector<CheckReport> run_suite(std::string_view suite, std::uint64_t seed, unsigned workers)
{
    std::vector<CheckReport> out;
    const bool all = suite == "all";
    if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end())
        throw ValidationError("unknown verification suite '" + std::string(suite) + "'");
    if (all || suite == "kl")
        suite_kl(out);
    if (all || suite == "chain")
        suite_chain(out, seed);
    if (all || suite == "witness")
        suite_witness(out);
    if (all || suite == "com")
        suite_com(out);
    if (all || suite == "xi")
        suite_xi(out, seed, workers);
    if (all || suite == "markov")
        suite_markov(out, seed, workers);
    if (all || suite == "pigeonhole")
        suite_pigeonhole(out, seed, workers);
    return out;
}

nlohmann::json to_json(const CheckReport& report)
{
    return {{"name", report.name},         {"status", status_name(report.status)},
            {"lhs", report.lhs},           {"rhs", report.rhs},
            {"tolerance", report.tolerance}, {"seeds", report.seeds}};
}

}  // namespace bai
