#include "bai/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <string>

#include "bai/errors.hpp"

namespace bai {
namespace {

using nlohmann::json;

std::string shortest(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void require_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where)
{
    if (!j.is_object())
        throw ValidationError(where + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ValidationError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
T get_as(const json& j, const std::string& key, const std::string& where)
{
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError("invalid or missing '" + key + "' in " + where + ": " + e.what());
    }
}

std::size_t get_count(const json& j, const std::string& key, const std::string& where)
{
    const json& v = j.at(key);
    if (!v.is_number_unsigned())
        throw ValidationError("'" + key + "' in " + where + " must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string log_column(const ErrorEstimate& e)
{
    return e.has_log_point() ? format_number(e.log_point()) : std::string(kBelowResolution);
}

}  // namespace

std::string format_number(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

FlippedFamily FamilySpec::build() const
{
    if (type == "alpha")
        return make_alpha_family(arms, alpha);
    return make_flipped_family(p_tail);
}

FamilySpec parse_family_spec(const json& j)
{
    const std::string where = "family spec";
    if (!j.is_object())
        throw ValidationError(where + " must be a JSON object");
    FamilySpec spec;
    spec.type = get_as<std::string>(j, "type", where);
    if (spec.type == "alpha") {
        require_keys(j, {"type", "K", "alpha", "id"}, where);
        if (!j.contains("K") || !j.contains("alpha"))
            throw ValidationError("alpha family spec needs 'K' and 'alpha'");
        spec.arms = get_count(j, "K", where);
        spec.alpha = get_as<double>(j, "alpha", where);
        spec.id = "alpha-K" + std::to_string(spec.arms) + "-a" + shortest(spec.alpha);
    } else if (spec.type == "explicit") {
        require_keys(j, {"type", "p_tail", "id"}, where);
        spec.p_tail = get_as<std::vector<double>>(j, "p_tail", where);
        spec.arms = spec.p_tail.size() + 1;
        spec.id = "explicit-K" + std::to_string(spec.arms);
    } else {
        throw ValidationError("family type must be 'alpha' or 'explicit', got '" + spec.type + "'");
    }
    if (j.contains("id"))
        spec.id = get_as<std::string>(j, "id", where);
    if (spec.id.empty() || spec.id.find_first_of(",\"\n\r") != std::string::npos)
        throw ValidationError("family id must be non-empty and free of commas, quotes and newlines");
    (void)spec.build();  // validates the parameters
    return spec;
}

json to_json(const FamilySpec& spec)
{
    json j{{"type", spec.type}, {"id", spec.id}};
    if (spec.type == "alpha") {
        j["K"] = spec.arms;
        j["alpha"] = spec.alpha;
    } else {
        j["p_tail"] = spec.p_tail;
    }
    return j;
}

StrategyConfig parse_strategy_config(const json& j)
{
    const std::string where = "strategy config";
    require_keys(j, {"kind", "a"}, where);
    const StrategyKind kind = parse_strategy_kind(get_as<std::string>(j, "kind", where));
    std::optional<double> a;
    if (j.contains("a"))
        a = get_as<double>(j, "a", where);
    return StrategyConfig(kind, a);
}

json to_json(const StrategyConfig& config)
{
    json j{{"kind", strategy_name(config.kind())}};
    if (config.exploration_a())
        j["a"] = *config.exploration_a();
    return j;
}

ExperimentConfig parse_experiment_config(const json& j)
{
    const std::string where = "experiment config";
    require_keys(j, {"family", "strategies", "T_grid", "replications", "seed", "level", "out"}, where);
    ExperimentConfig c;
    if (!j.contains("family"))
        throw ValidationError("experiment config needs 'family'");
    c.family = parse_family_spec(j.at("family"));

    if (!j.contains("strategies") || !j.at("strategies").is_array() || j.at("strategies").empty())
        throw ValidationError("experiment config needs a non-empty 'strategies' array");
    std::set<StrategyKind> seen;
    for (const auto& s : j.at("strategies")) {
        c.strategies.push_back(parse_strategy_config(s));
        if (!seen.insert(c.strategies.back().kind()).second)
            throw ValidationError("strategy '" + std::string(strategy_name(c.strategies.back().kind())) +
                                  "' listed twice");
    }

    if (!j.contains("T_grid") || !j.at("T_grid").is_array() || j.at("T_grid").empty())
        throw ValidationError("experiment config needs a non-empty 'T_grid' array");
    for (const auto& t : j.at("T_grid")) {
        if (!t.is_number_unsigned() || t.get<std::size_t>() == 0)
            throw ValidationError("T_grid entries must be positive integers");
        const auto T = t.get<std::size_t>();
        if (!c.budgets.empty() && T <= c.budgets.back())
            throw ValidationError("T_grid must be strictly increasing");
        c.budgets.push_back(T);
    }

    if (j.contains("replications")) {
        c.replications = get_count(j, "replications", where);
        if (c.replications == 0)
            throw ValidationError("replications must be >= 1");
    }
    if (j.contains("seed"))
        c.seed = get_count(j, "seed", where);
    if (j.contains("level")) {
        c.level = get_as<double>(j, "level", where);
        if (!(c.level > 0.0 && c.level < 1.0))
            throw ValidationError("level must lie in (0, 1)");
    }
    if (j.contains("out"))
        c.out_dir = get_as<std::string>(j, "out", where);

    const std::size_t K = c.family.arms;
    for (const auto& s : c.strategies) {
        for (const std::size_t T : c.budgets)
            detail::check_budget(s, K, T);
    }
    return c;
}

json to_json(const ExperimentConfig& config)
{
    json strategies = json::array();
    for (const auto& s : config.strategies)
        strategies.push_back(to_json(s));
    return {{"family", to_json(config.family)}, {"strategies", strategies}, {"T_grid", config.budgets},
            {"replications", config.replications}, {"seed", config.seed}, {"level", config.level},
            {"out", config.out_dir}};
}

json to_json(const ComplexityReport& report)
{
    json j{{"h_excl", report.h_excl}, {"h2", report.h2}, {"gaps", report.gaps}};
    j["h_incl"] = report.h_incl ? json(*report.h_incl) : json(nullptr);
    return j;
}

json to_json(const ErrorEstimate& e)
{
    json j{{"replications", e.replications}, {"errors", e.errors}, {"point", e.point},
           {"ci_low", e.ci_low},             {"ci_high", e.ci_high}, {"level", e.level}};
    j["log_point"] = e.has_log_point() ? json(e.log_point()) : json(kBelowResolution);
    return j;
}

json to_json(const BoundValue& b)
{
    return {{"name", b.name},
            {"log_value", b.log_value},
            {"valid", b.valid},
            {"vacuous", b.vacuous},
            {"side_condition", b.side_condition}};
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out)
{
    out << kSweepCsvHeader << '\n';
    for (const SweepRow& row : rows) {
        for (Arm i = 0; i < row.per_i.size(); ++i) {
            const ErrorEstimate& e = row.per_i[i];
            out << row.family_id << ',' << strategy_name(row.strategy) << ',' << row.arms << ',' << row.budget << ','
                << i + 1 << ',' << e.replications << ',' << e.errors << ',' << format_number(e.point) << ','
                << format_number(e.ci_low) << ',' << format_number(e.ci_high) << ','
                << (i == row.worst_i ? 1 : 0) << '\n';
        }
    }
}

void write_plot_data(std::span<const SweepRow> rows, const FlippedFamily& family, std::ostream& out)
{
    if (rows.empty())
        throw ContractError("plot data needs at least one row");
    out << "T,log_p_hat,log_ci_high";
    for (const BoundValue& b : family_bound_curves(family, rows.front().budget))
        out << ',' << b.name;
    out << '\n';
    for (const SweepRow& row : rows) {
        out << row.budget << ',' << log_column(row.worst_error) << ','
            << format_number(std::log(row.worst_error.ci_high));
        for (const BoundValue& b : family_bound_curves(family, row.budget))
            out << ',' << format_number(b.log_value);
        out << '\n';
    }
}

SweepOutput run_experiment(const ExperimentConfig& config, unsigned workers)
{
    const FlippedFamily family = config.family.build();
    SweepOutput output;
    const SimOptions options{config.level, workers};
    for (const auto& strategy : config.strategies) {
        auto rows = sweep_family(strategy, family, config.budgets, config.replications, config.seed, options,
                                 config.family.id);
        output.rows.insert(output.rows.end(), std::make_move_iterator(rows.begin()),
                           std::make_move_iterator(rows.end()));
    }
    return output;
}

void emit_results(const ExperimentConfig& config, const SweepOutput& output)
{
    if (output.rows.empty())
        throw ContractError("nothing to emit");
    namespace fs = std::filesystem;
    const fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory '" + dir.string() + "'");

    auto open = [](const fs::path& path) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw IoError("cannot write '" + path.string() + "'");
        return f;
    };
    auto close = [](std::ofstream& f, const fs::path& path) {
        f.close();
        if (!f)
            throw IoError("failed writing '" + path.string() + "'");
    };

    json files = json::array();
    {
        const fs::path path = dir / "sweep.csv";
        auto f = open(path);
        write_sweep_csv(output.rows, f);
        close(f, path);
        files.push_back("sweep.csv");
    }
    const FlippedFamily family = config.family.build();
    for (const auto& strategy : config.strategies) {
        std::vector<SweepRow> rows;
        for (const auto& row : output.rows) {
            if (row.strategy == strategy.kind())
                rows.push_back(row);
        }
        const std::string name = "plot_" + std::string(strategy_name(strategy.kind())) + ".csv";
        const fs::path path = dir / name;
        auto f = open(path);
        write_plot_data(rows, family, f);
        close(f, path);
        files.push_back(name);
    }
    {
        const fs::path path = dir / "metadata.json";
        auto f = open(path);
        const json meta{{"config", to_json(config)}, {"csv_header", kSweepCsvHeader}, {"files", files}};
        f << meta.dump(2) << '\n';
        close(f, path);
    }
}

}  // namespace bai
