#include "bai/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bai/bandit.hpp"
#include "bai/complexity.hpp"
#include "bai/errors.hpp"
#include "bai/report.hpp"
#include "bai/simulator.hpp"
#include "bai/theory.hpp"
#include "bai/verify.hpp"

namespace bai {
namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInternal = 2;
constexpr int kExitChecksFailed = 3;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string out_dir;
    std::optional<double> level;

    unsigned resolved_workers() const
    {
        if (const char* env = std::getenv("BAI_LAB_WORKERS"); env && *env) {
            try {
                const long n = std::stol(env);
                if (n >= 1)
                    return static_cast<unsigned>(n);
            } catch (const std::exception&) {
            }
            throw ValidationError(std::string("BAI_LAB_WORKERS must be a positive integer, got '") + env + "'");
        }
        return workers.value_or(default_workers());
    }
};

json read_json_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw ValidationError("cannot read config file '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

json parse_json_arg(const std::string& text, const std::string& flag)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(flag + " is not valid JSON: " + e.what());
    }
}

int cmd_complexity(const std::string& instance_text, const std::string& family_text, std::ostream& out)
{
    if (instance_text.empty() == family_text.empty())
        throw ValidationError("complexity needs exactly one of --instance or --family");
    if (!instance_text.empty()) {
        const BanditInstance instance = parse_instance_literal(instance_text);
        json j = to_json(complexity_report(instance));
        j["instance"] = std::vector<double>(instance.means().begin(), instance.means().end());
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    const FamilySpec spec = parse_family_spec(parse_json_arg(family_text, "--family"));
    const FamilyComplexities fc = family_complexities(spec.build());
    const json j{{"family", to_json(spec)}, {"H", fc.h}, {"h_star", fc.h_star}};
    out << j.dump(2) << '\n';
    return kExitOk;
}

struct SimulateArgs {
    std::string instance;
    std::string strategy;
    std::optional<double> a;
    std::size_t budget = 0;
    std::size_t replications = 1000;
};

int cmd_simulate(const SimulateArgs& args, const CommonFlags& common, std::ostream& out)
{
    const BanditInstance instance = parse_instance_literal(args.instance);
    const StrategyConfig config(parse_strategy_kind(args.strategy), args.a);
    if (args.replications == 0)
        throw ValidationError("--R must be >= 1");
    const std::uint64_t seed = common.seed.value_or(0);
    const SimOptions options{common.level.value_or(0.95), common.resolved_workers()};
    const ErrorEstimate e = estimate_error(config, instance, args.budget, args.replications, seed, options);
    const json j{{"instance", std::vector<double>(instance.means().begin(), instance.means().end())},
                 {"strategy", to_json(config)},
                 {"T", args.budget},
                 {"R", args.replications},
                 {"seed", seed},
                 {"estimate", to_json(e)}};
    out << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_sweep(const CommonFlags& common, std::ostream& out)
{
    if (common.config_path.empty())
        throw ValidationError("sweep needs --config PATH");
    ExperimentConfig config = parse_experiment_config(read_json_file(common.config_path));
    if (common.seed)
        config.seed = *common.seed;
    if (common.level) {
        if (!(*common.level > 0.0 && *common.level < 1.0))
            throw ValidationError("--level must lie in (0, 1)");
        config.level = *common.level;
    }
    if (!common.out_dir.empty())
        config.out_dir = common.out_dir;
    const SweepOutput output = run_experiment(config, common.resolved_workers());
    emit_results(config, output);
    out << "wrote " << output.rows.size() << " sweep rows to " << config.out_dir << '\n';
    return kExitOk;
}

struct BoundsArgs {
    std::size_t budget = 0;
    std::size_t arms = 0;
    std::optional<double> a, h2, h1, h_i, h_star, h_of_problem;
    std::string family;
};

int cmd_bounds(const BoundsArgs& args, std::ostream& out)
{
    std::vector<BoundValue> bounds;
    if (!args.family.empty()) {
        const FamilySpec spec = parse_family_spec(parse_json_arg(args.family, "--family"));
        bounds = family_bound_curves(spec.build(), args.budget);
    } else {
        if (args.arms == 0)
            throw ValidationError("bounds needs --K (or --family)");
        if (args.a)
            bounds.push_back(bound_thm1_a(args.budget, args.arms, *args.a));
        if (args.a && args.h_of_problem)
            bounds.push_back(bound_thm1_adapt(args.budget, args.arms, *args.a, *args.h_of_problem));
        if (args.h1)
            bounds.push_back(bound_thm2_first(args.budget, args.arms, *args.h1));
        if (args.h_i && args.h_star)
            bounds.push_back(bound_thm2_second(args.budget, args.arms, *args.h_i, *args.h_star));
        if (args.a)
            bounds.push_back(bound_known_a(args.budget, args.arms, *args.a));
        if (args.h2)
            bounds.push_back(bound_sr(args.budget, args.arms, *args.h2));
        if (bounds.empty())
            throw ValidationError("bounds needs at least one of --a, --H1, --Hi with --hstar, --H2");
    }
    json list = json::array();
    for (const auto& b : bounds)
        list.push_back(to_json(b));
    const json j{{"T", args.budget}, {"bounds", list}};
    out << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_verify(const std::string& suite, const CommonFlags& common, std::ostream& out)
{
    const std::uint64_t seed = common.seed.value_or(0);
    const auto checks = run_suite(suite, seed, common.resolved_workers());
    json list = json::array();
    bool passed = true;
    for (const auto& c : checks) {
        list.push_back(to_json(c));
        passed = passed && c.status != CheckStatus::fail;
    }
    const json report{{"suite", suite}, {"seed", seed}, {"passed", passed}, {"checks", list}};
    const std::string text = report.dump(2) + "\n";
    out << text;
    if (!common.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(common.out_dir, ec);
        const auto path = std::filesystem::path(common.out_dir) / ("verify_" + suite + ".json");
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << text;
        f.close();
        if (ec || !f)
            throw IoError("cannot write '" + path.string() + "'");
    }
    return passed ? kExitOk : kExitChecksFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Fixed-budget best-arm identification lab", "bai_lab"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonFlags common;
    app.add_option("--config", common.config_path, "experiment config file (JSON)");
    app.add_option("--seed", common.seed, "master seed (u64)");
    app.add_option("--workers", common.workers, "worker threads (BAI_LAB_WORKERS overrides)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", common.out_dir, "output directory");
    app.add_option("--level", common.level, "confidence level of the Wilson intervals")->check(CLI::Range(0.0, 1.0));

    std::string instance_text, family_text;
    auto* complexity = app.add_subcommand("complexity", "complexity functionals of an instance or a family");
    complexity->add_option("--instance", instance_text, "JSON array of means");
    complexity->add_option("--family", family_text, "family spec (JSON)");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo error estimate for one strategy and instance");
    simulate->add_option("--instance", sim.instance, "JSON array of means")->required();
    simulate->add_option("--strategy", sim.strategy, "uniform | successive_rejects | successive_halving | ucb_e")
        ->required();
    simulate->add_option("--a", sim.a, "UCB-E exploration parameter");
    simulate->add_option("--T", sim.budget, "budget")->required();
    simulate->add_option("--R", sim.replications, "replications");

    auto* sweep = app.add_subcommand("sweep", "worst-case error sweep over a flipped family (needs --config)");

    BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("bounds", "evaluate the lower and upper bounds in log domain");
    bounds->add_option("--T", bounds_args.budget, "budget")->required();
    bounds->add_option("--K", bounds_args.arms, "number of arms");
    bounds->add_option("--a", bounds_args.a, "complexity cap a");
    bounds->add_option("--H2", bounds_args.h2, "H2 of the instance");
    bounds->add_option("--H1", bounds_args.h1, "hardest family complexity H(1)");
    bounds->add_option("--Hi", bounds_args.h_i, "family complexity H(i)");
    bounds->add_option("--hstar", bounds_args.h_star, "family quantity h*");
    bounds->add_option("--HG", bounds_args.h_of_problem, "complexity H(G) of the witness problem");
    bounds->add_option("--family", bounds_args.family, "family spec (JSON); evaluates every curve");

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "numerical verification suites");
    verify->add_option("--suite", suite, "kl | chain | witness | com | xi | markov | pigeonhole | all");

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*complexity)
            return cmd_complexity(instance_text, family_text, out);
        if (*simulate)
            return cmd_simulate(sim, common, out);
        if (*sweep)
            return cmd_sweep(common, out);
        if (*bounds)
            return cmd_bounds(bounds_args, out);
        if (*verify)
            return cmd_verify(suite, common, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitValidation;
}

}  // namespace bai
