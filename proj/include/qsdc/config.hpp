#pragma once

// Experiment configuration files (JSON). Nested objects mirror the dotted key
// names, e.g. "attack.kind" is {"attack": {"kind": ...}}. Unknown keys are
// rejected with a ConfigError that names the key.
//
//   {
//     "message_length": 64, "trials": 50, "seed": 7,
//     "p_ab_check": 0.25, "p_bob_cm": 0.25, "p_charlie_cm": 0.25,
//     "abort_policy": "strict" | "record_and_continue",
//     "attack": {
//       "kind": "none" | "intercept_resend" | "disturbance_x" | "disturbance_z" | "entangle_measure",
//       "segments": ["AtoB", "BtoC", "CtoA"],
//       "beta_sq": 0.5,          // entangle_measure only
//       "probability": 1.0       // optional per-round attack probability
//     },
//     "sweep": {"beta_sq": [0, 0.25, 0.5]},   // sweep subcommand only
//     "max_rounds": 0, "threads": 1            // optional
//   }

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qsdc/experiment.hpp"

namespace qsdc {

struct LoadedConfig {
    ExperimentConfig experiment;
    /// Grid for the sweep subcommand; empty when the file has no sweep block.
    std::vector<double> sweep_beta_sq;
};

/// Throws ConfigError on any invalid, missing-where-required or unknown key.
LoadedConfig parse_config(const nlohmann::json& j);

/// Reads and parses a config file; unreadable files and JSON syntax errors are
/// reported as ConfigError too.
LoadedConfig load_config(const std::filesystem::path& path);

nlohmann::json config_to_json(const LoadedConfig& config);

ChannelSegment parse_segment(const std::string& name);

} // namespace qsdc
