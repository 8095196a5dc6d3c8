#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tvopt/harness.hpp"

namespace tvopt {

inline constexpr int kConfigVersion = 1;

/// Parses and validates an experiment config (JSON). Unknown keys, wrong
/// types and a missing or unsupported "version" throw Error(InvalidConfig)
/// naming the offending key path.
ExperimentSpec parse_experiment(std::string_view json_text);
ExperimentSpec load_experiment(const std::filesystem::path& path);

/// Names accepted by example_config: scalar-a, scalar-b, tracking, budget.
std::vector<std::string> example_names();
/// Pretty-printed JSON config for a built-in example.
std::string example_config(std::string_view name);

/// BoundReport as a JSON object. Q is the string "quadratic" when C1 = 0,
/// infinities are written as the string "inf" and absent values as null.
std::string bound_report_json(const BoundReport& report, int indent = 2);

}  // namespace tvopt
