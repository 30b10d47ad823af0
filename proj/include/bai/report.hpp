#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bai/complexity.hpp"
#include "bai/instance_factory.hpp"
#include "bai/simulator.hpp"
#include "bai/strategies.hpp"
#include "bai/theory.hpp"

namespace bai {

/// Exact header of the sweep CSV.
inline constexpr std::string_view kSweepCsvHeader =
    "family_id,strategy,K,T,i,R,errors,p_hat,ci_low,ci_high,is_worst";

/// Token written in log-probability columns when no error was observed.
inline constexpr std::string_view kBelowResolution = "below_resolution";

/// Shortest-form decimal with 17 significant digits.
std::string format_number(double value);

/// {"type": "alpha", "K": 16, "alpha": 1.0} or {"type": "explicit", "p_tail": [...]}, optional "id".
struct FamilySpec {
    std::string type;
    std::size_t arms = 0;
    double alpha = 0.0;
    std::vector<double> p_tail;
    std::string id;

    FlippedFamily build() const;
};

FamilySpec parse_family_spec(const nlohmann::json& j);
nlohmann::json to_json(const FamilySpec& spec);

/// {"kind": "successive_rejects"} or {"kind": "ucb_e", "a": 176.0}.
StrategyConfig parse_strategy_config(const nlohmann::json& j);
nlohmann::json to_json(const StrategyConfig& config);

struct ExperimentConfig {
    FamilySpec family;
    std::vector<StrategyConfig> strategies;
    std::vector<std::size_t> budgets;  ///< T_grid, strictly increasing
    std::size_t replications = 1000;
    std::uint64_t seed = 0;
    double level = 0.95;
    std::string out_dir = "results";
};

/// Validates every field; throws ValidationError with the offending key.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

nlohmann::json to_json(const ComplexityReport& report);
nlohmann::json to_json(const ErrorEstimate& estimate);
nlohmann::json to_json(const BoundValue& bound);

/// One line per (row, i), 1-based i, preceded by kSweepCsvHeader.
void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out);

/// Columns T, log_p_hat, log_ci_high and one column per family bound curve,
/// one line per row of a single strategy.
void write_plot_data(std::span<const SweepRow> rows, const FlippedFamily& family, std::ostream& out);

struct SweepOutput {
    std::vector<SweepRow> rows;  ///< strategy-major, then budget
};

SweepOutput run_experiment(const ExperimentConfig& config, unsigned workers);

/// Writes sweep.csv, plot_<strategy>.csv and metadata.json under config.out_dir.
/// Throws IoError when the directory cannot be written.
void emit_results(const ExperimentConfig& config, const SweepOutput& output);

}  // namespace bai
