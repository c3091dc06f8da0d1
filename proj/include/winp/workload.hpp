#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "winp/dag.hpp"

namespace winp {

constexpr int kOperatorKindCount = 9;

struct OpCoefficients {
    double linear = 0.0;
    double quadratic = 0.0;
};

struct WorkloadGenConfig {
    std::vector<int> token_sizes;              // N_k, tokens per slice
    int feature_dim = 512;                     // D_f, elements per token
    double bytes_per_element = 2.0;            // fp16
    std::vector<double> compression;           // kappa_k in (0, 1]
    double overhead = 1.05;                    // eta >= 1
    int core_count = 4;
    double latency_scale = 6.0;
    double slot_ms = 1.0;                      // Delta
    std::array<double, 2> jitter_range = {0.9, 1.1};        // xi
    std::array<double, 2> speed_jitter_range = {-0.08, 0.08}; // u_c
    std::array<double, 2> bw_jitter_range = {-0.05, 0.05};
    // Baseline latency g_op(S) = linear*S + quadratic*S^2, indexed by kind.
    std::array<OpCoefficients, kOperatorKindCount> op_coefficients = {{
        {0.0020, 0.0},    // Embed
        {0.0030, 1.8e-5}, // Enc1
        {0.0030, 1.8e-5}, // Enc2
        {0.0030, 1.8e-5}, // Enc3
        {0.0015, 0.0},    // Proj
        {0.0010, 0.0},    // Align
        {0.0025, 4e-6},   // Fusion
        {0.0015, 0.0},    // Classifier
        {0.0002, 0.0},    // Output
    }};
    // Bandwidth demand base per kind; demand = clamp(base + slope*S + jitter).
    std::array<double, kOperatorKindCount> bw_base = {
        0.35, 0.25, 0.25, 0.25, 0.20, 0.15, 0.30, 0.20, 0.15};
    double bw_slope = 0.0005;
    std::uint64_t seed = 1;

    int modality_count() const { return static_cast<int>(token_sizes.size()); }
    void validate() const; // throws ConfigError
};

struct Payload {
    double bytes = 0.0;
    double bits = 0.0;
};

// D_k = N_k * D_f * b * kappa_k * eta, in bytes; bits = 8 * bytes.
std::vector<Payload> compute_payloads(const WorkloadGenConfig& cfg);

struct ProfileTable {
    // latency[v][c] in ms, bandwidth[v][c] in (0, 1], work = latency*bandwidth
    std::vector<std::vector<double>> latency;
    std::vector<std::vector<double>> bandwidth;
    std::vector<std::vector<double>> work;
    std::vector<double> mean_latency; // across cores

    int core_count() const {
        return latency.empty() ? 0 : static_cast<int>(latency[0].size());
    }
};

// Token scale S(v): N_k for slice jobs, sum of all N_k for cross-modality jobs.
double token_scale(const Dag& dag, const WorkloadGenConfig& cfg, int job_id);

// Synthetic per-(job, core) latency and bandwidth demand. Draw order is fixed
// (core speeds, then per-job per-core jitter, then per-job bandwidth jitter)
// so the table is bit-identical for a given seed. Bandwidth demand is drawn
// per job; cores differ only through the latency jitter and core speed.
ProfileTable generate_profile(const Dag& dag, const WorkloadGenConfig& cfg);

using RankMap = std::vector<double>; // upward rank per job, ms

// rank(v) = mean_latency(v) + max over successors of rank; exit jobs use 0.
RankMap upward_ranks(const Dag& dag, const ProfileTable& profile);

} // namespace winp
