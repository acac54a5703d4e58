#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cltlab/config.hpp"
#include "cltlab/serialize.hpp"

namespace cltlab {

struct ExperimentInfo {
    std::string name;
    std::string summary;
    std::vector<std::string> required_keys;
};

/// The fixed registry of experiment kinds.
const std::vector<ExperimentInfo>& experiment_registry();

struct RunOverrides {
    std::optional<int> workers;
};

struct ExperimentOutcome {
    bool assertions_ok = true; ///< false -> exit code 2
    std::string summary;       ///< one-screen text
    Json report;               ///< full JSON report
    std::string csv;           ///< per-row summary table
};

/// Full configuration checks without executing anything; returns problems.
std::vector<std::string> validate_config(const Config& config);

/// Executes the configured experiment.
ExperimentOutcome run_config(const Config& config, const RunOverrides& overrides = {});

// Shared builders (also used by tests and the acceptance suite).
InnovationSpec innovation_from_config(const Config& config);
MACoefficients coefficients_from_config(const Config& config);
BoxFamily family_from_config(const Config& config);
MarkovChain chain_from_config(const Config& config);

} // namespace cltlab
