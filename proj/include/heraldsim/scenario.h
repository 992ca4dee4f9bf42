#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace heraldsim {

inline constexpr const char *kToolName = "heraldsim";
inline constexpr const char *kToolVersion = "0.1.0";

/// Exit statuses of a scenario run.
enum ExitStatus : int {
    kExitOk = 0,
    kExitInvalidConfig = 2,
    kExitNumericalFailure = 3,
};

/// One requested run. `parameters` holds the scenario-specific keys
/// (alpha, s, xi, keep, mode, eta, samples, cutoff, state, etas); anything
/// else is reported by validate().
struct ScenarioConfig {
    std::string scenario;
    nlohmann::json parameters = nlohmann::json::object();
    /// Empty means the current directory.
    std::filesystem::path output;
    /// "MIN:MAX:POINTS"; the default grid is -5:5:201.
    std::optional<std::string> grid;
};

/// Names of the runnable scenarios.
const std::vector<std::string> &scenario_names();

/// Reads a JSON run manifest: {"scenario": ..., "parameters": {...}, "output": ..., "grid": ...}.
/// Throws ParameterError for malformed documents.
ScenarioConfig load_config(const std::filesystem::path &path);

/// Copies every key of `overrides` (a flag-derived config) over `base`.
ScenarioConfig merge(ScenarioConfig base, const ScenarioConfig &overrides);

/// Every violated constraint, without running any simulation. Input states
/// are constructed so that truncation failures are predicted.
std::vector<std::string> validate(const ScenarioConfig &config);

/// Parameters with defaults filled in. Requires a config that passed validate().
nlohmann::json resolved_parameters(const ScenarioConfig &config);

/// Output files of a scenario, keyed by file name.
using Artifacts = std::map<std::string, std::string>;

/// Runs a validated scenario in memory.
Artifacts compute(const ScenarioConfig &config);

/// Validates, computes, then writes all artifacts into `config.output`
/// (each through a temporary file and a rename). Diagnostics go to `log`.
int run(const ScenarioConfig &config, std::ostream &log);

}  // namespace heraldsim
