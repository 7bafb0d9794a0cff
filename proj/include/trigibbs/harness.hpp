#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "trigibbs/config.hpp"

namespace trigibbs::harness {

inline constexpr const char* kVersion = "trigibbs 0.1.0";

struct PresetRecord {
    ExperimentConfig config;
    std::uint64_t hash = 0;
    std::vector<std::string> files;  // paths written, CSV first
    nlohmann::json summary;          // timestamps, annotations, version
};

// Resolution order for the output directory: config value, then the
// TRIGIBBS_OUT environment variable, then "out".
std::string resolve_output_dir(const ExperimentConfig& cfg);

// Runs a preset (fig_rate_compare | fig_ldrate | fig_density | acceptance),
// writing <preset>.csv (data) and <preset>_summary.json under the output
// directory and appending the summary to runs.jsonl. `name` overrides
// cfg.preset when nonempty. CSV payloads carry the config hash on line one
// and no timestamps, so equal (config, seed) reproduce them byte for byte.
PresetRecord run_preset(const std::string& name, ExperimentConfig cfg);

// Formats a data row cell; CSV numbers use 12 significant digits.
std::string csv_cell(double v);

}  // namespace trigibbs::harness
