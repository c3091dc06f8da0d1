#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "winp/workload.hpp"

namespace winp {

enum class Mode { RTFS, PACS };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name); // throws ConfigError

struct ExperimentConfig {
    // Workload
    std::vector<int> token_sizes = {512, 128, 256, 128, 192, 128};
    int feature_dim = 512;
    double bytes_per_element = 2.0; // fp16
    double overhead = 1.05;
    std::vector<double> compression = {0.25, 0.25, 0.80, 0.60, 0.60, 0.60};
    std::array<double, 2> jitter_range = {0.9, 1.1};
    std::array<double, 2> speed_jitter_range = {-0.08, 0.08};
    std::array<double, 2> bw_jitter_range = {-0.05, 0.05};
    double latency_scale = 6.0;
    std::array<OpCoefficients, kOperatorKindCount> op_coefficients =
        WorkloadGenConfig{}.op_coefficients;
    std::array<double, kOperatorKindCount> bw_base = WorkloadGenConfig{}.bw_base;
    double bw_slope = 0.0005;

    // Platform
    int cores = 4;
    double b_max = 1.0;

    // Channel
    double slot_ms = 1.0;
    int subcarriers = 16;
    std::array<double, 2> rate_range = {1000.0, 10000.0}; // kbit/s
    int trace_slots = 8000;
    double rate_floor = 1e-6;

    // Run control
    Mode mode = Mode::RTFS;
    std::uint64_t seed = 1;
    int replications = 1;
    double engine_eps = 1e-9;

    int modality_count() const { return static_cast<int>(token_sizes.size()); }
    WorkloadGenConfig workload_config() const;
    void validate() const;
};

// Parse a JSON document; unspecified fields keep their defaults, unknown keys
// and length mismatches are rejected with a diagnostic naming the field.
ExperimentConfig parse_config_json(const std::string& json_text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical JSON echo of the effective config.
std::string config_to_json(const ExperimentConfig& cfg);

// FNV-1a over the canonical JSON with the seed field blanked; the seed is
// reported next to the hash instead.
std::string config_hash(const ExperimentConfig& cfg);

} // namespace winp
