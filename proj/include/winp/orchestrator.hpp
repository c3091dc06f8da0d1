#pragma once

#include <optional>
#include <string>
#include <vector>

#include "winp/comm_sched.hpp"
#include "winp/config.hpp"
#include "winp/engine.hpp"

namespace winp {

struct ExperimentResult {
    Mode mode = Mode::RTFS;
    std::uint64_t seed = 0;
    double makespan_ms = 0.0;
    double comm_ms = 0.0;    // t_start for RTFS, latest release for PACS
    double compute_ms = 0.0; // makespan - comm
    std::optional<double> t_start_ms; // RTFS only
    std::vector<double> release_ms;
    std::vector<double> utilization; // busy / makespan per core
    AllocationResult allocation;
    ScheduleTrace schedule;
    Dag dag;
};

// Optimizer interface: turns payloads, channel trace/predictor, DAG and
// profile into an RB allocation plus per-slice gates. RTFS and PACS are the
// two built-in implementations; alternatives can be plugged in here.
using Optimizer = AllocationResult (*)(const RateTrace&, const RatePredictor&,
                                       const std::vector<Payload>&, const Dag&,
                                       const ProfileTable&);

// One optimize-then-evaluate pass: allocate RBs, replay delivery as a
// closed-loop consistency check, then run the matching engine.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct Metrics {
    std::string config_hash;
    Mode mode;
    std::uint64_t seed;
    double makespan_ms;
    std::optional<double> t_start_ms;
    double comm_ms;
    double compute_ms;
    std::vector<double> release_ms;
    std::vector<double> utilization;
    std::optional<double> gain_pct;
};

Metrics compute_metrics(const ExperimentConfig& cfg, const ExperimentResult& result);

// (RTFS - PACS) / RTFS, in percent; positive means PACS is faster.
double gain_percent(double rtfs_makespan_ms, double pacs_makespan_ms);

std::string metrics_to_json(const Metrics& metrics);

enum class SweepDimension {
    Cores,
    Subcarriers,
    LatencyScale,
    BMax,
    TokenVector,
    CompressionVector,
};

SweepDimension sweep_dimension_from_string(const std::string& name);
const char* to_string(SweepDimension dim);

struct SweepValue {
    double scalar = 0.0;               // scalar dimensions
    std::vector<double> vector;        // token / compression vectors
    std::string label;
};

struct SweepCell {
    int value_index = 0;
    int seed_index = 0;
    std::uint64_t seed = 0;
    bool feasible = false;
    std::string error;
    double rtfs_makespan_ms = 0.0;
    double pacs_makespan_ms = 0.0;
    double rtfs_comm_ms = 0.0;
    double pacs_comm_ms = 0.0;
    double rtfs_compute_ms = 0.0;
    double pacs_compute_ms = 0.0;
    double gain_pct = 0.0;
};

struct SweepSummaryRow {
    std::string value_label;
    Mode mode;
    int feasible_cells = 0;
    double mean_makespan_ms = 0.0;
    double std_makespan_ms = 0.0;
    double mean_gain_pct = 0.0;
};

struct SweepResult {
    SweepDimension dimension;
    std::vector<SweepValue> values;
    std::vector<SweepCell> cells; // values-major, then seeds
    std::vector<SweepSummaryRow> summary;
};

// Paired RTFS/PACS runs per (value, seed); both modes of a cell share the
// derived seed, hence the same channel trace and profile. Cells run in
// parallel when OpenMP is available; output order is by (value, seed).
SweepResult sweep(const ExperimentConfig& base, SweepDimension dimension,
                  const std::vector<SweepValue>& values, int seed_count,
                  int max_parallel = 0);

ExperimentConfig apply_sweep_value(const ExperimentConfig& base,
                                   SweepDimension dimension, const SweepValue& value);

void write_sweep_csv(const SweepResult& result, std::ostream& out);
void write_sweep_summary_csv(const SweepResult& result, std::ostream& out);

// The 5x5 token-vector x compression-vector grid used for gain-trend checks.
std::vector<std::vector<int>> benchmark_token_vectors();
std::vector<std::vector<double>> benchmark_compression_vectors();

struct GridCellSummary {
    int token_index = 0;
    int compression_index = 0;
    int feasible_cells = 0;
    double mean_rtfs_ms = 0.0;
    double mean_pacs_ms = 0.0;
    double mean_gain_pct = 0.0;
};

// Full grid with paired seeds per cell.
std::vector<GridCellSummary> run_token_compression_grid(
    const ExperimentConfig& base, const std::vector<std::vector<int>>& token_vectors,
    const std::vector<std::vector<double>>& compression_vectors, int seed_count,
    int max_parallel = 0);

void write_grid_csv(const std::vector<GridCellSummary>& grid,
                    const std::vector<std::vector<int>>& token_vectors,
                    const std::vector<std::vector<double>>& compression_vectors,
                    std::ostream& out);

} // namespace winp
