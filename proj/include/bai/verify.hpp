#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace bai {

enum class CheckStatus { pass, fail, vacuous };

struct CheckReport {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    std::vector<std::uint64_t> seeds;
};

/// Suite names accepted by run_suite, "all" last.
std::span<const std::string_view> suite_names() noexcept;

/// Runs one verification suite. Results depend only on (suite, seed).
/// Throws ValidationError for an unknown suite.
std::vector<CheckReport> run_suite(std::string_view suite, std::uint64_t seed, unsigned workers = 1);

nlohmann::json to_json(const CheckReport& report);

}  // namespace bai
