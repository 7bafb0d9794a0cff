#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace trigibbs {

// Full description of an experiment run; (config, seed) determines every
// output byte except timestamps. Round-trips losslessly through the
// key-value file format (doubles serialized with 17 significant digits).
struct ExperimentConfig {
    std::string preset = "fig_rate_compare";
    std::uint64_t seed = 1;
    std::string output_dir;  // empty: resolved from TRIGIBBS_OUT, else "out"

    std::vector<double> grid_c;
    std::vector<double> grid_eta;
    std::vector<int> grid_n;
    std::vector<double> grid_zeta;
    std::vector<double> grid_b;

    int chains = 2;
    std::int64_t sweeps = 2000;
    std::int64_t thin = 1;
    std::int64_t burnin = -1;    // -1: per-module default schedule
    std::int64_t max_steps = 0;  // 0: uncapped; otherwise must cover burn-in

    std::map<std::string, double> tolerance;

    bool operator==(const ExperimentConfig&) const = default;
};

// Parses the sectioned key-value format; throws ConfigError on unknown
// sections/keys or malformed values.
ExperimentConfig parse_config(const std::string& text);

// Reads and parses a config file; ConfigError if unreadable.
ExperimentConfig load_config(const std::string& path);

// Canonical serialization: fixed section and key order, comma-joined lists.
std::string serialize_config(const ExperimentConfig& cfg);

// FNV-1a hash of the canonical serialization; embedded in output files.
std::uint64_t config_hash(const ExperimentConfig& cfg);

// Throws ConfigError on: unknown preset, eta outside [0,1), n <= 0,
// chains/sweeps/thin < 1, zeta outside [0,1], negative c or b, or a step
// cap below the burn-in it must contain.
void validate_config(const ExperimentConfig& cfg);

}  // namespace trigibbs
