#include "winp/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "winp/errors.hpp"
#include "winp/rng.hpp"

namespace winp {

using nlohmann::json;

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const int modalities = cfg.modality_count();

    ExperimentResult result;
    result.mode = cfg.mode;
    result.seed = cfg.seed;
    result.dag = build_multimodal_dag(modalities);

    const WorkloadGenConfig wcfg = cfg.workload_config();
    const std::vector<Payload> payloads = compute_payloads(wcfg);
    const ProfileTable profile = generate_profile(result.dag, wcfg);
    const RankMap ranks = upward_ranks(result.dag, profile);

    const RateTrace trace =
        generate_rate_trace(modalities, cfg.subcarriers, cfg.trace_slots,
                            cfg.rate_range[0], cfg.rate_range[1], cfg.slot_ms, cfg.seed);
    const RatePredictor predictor =
        suffix_mean_predictor(slot_mean_rates(trace), cfg.rate_floor);

    result.allocation =
        cfg.mode == Mode::RTFS
            ? rtfs_allocate(trace, predictor, payloads)
            : pacs_allocate(trace, predictor, payloads, result.dag,
                            profile.mean_latency);

    // Closed loop: replaying the emitted allocation must reproduce the
    // arrival slots the allocator recorded.
    const DeliveryResult replay =
        replay_delivery(trace, result.allocation.allocation, payloads);
    for (int k = 0; k < modalities; ++k) {
        if (!replay.slices[k].arrival_slot ||
            *replay.slices[k].arrival_slot != result.allocation.arrival_slots[k])
            throw StructuralError("run_experiment: replay disagrees with allocator "
                                  "arrival for slice " + std::to_string(k));
    }

    result.release_ms = result.allocation.release_ms;
    const EngineParams params{cfg.b_max, cfg.engine_eps};
    if (cfg.mode == Mode::RTFS) {
        result.schedule = run_waitall(result.dag, profile, ranks,
                                      result.allocation.t_start_ms,
                                      result.allocation.release_ms, params);
        result.t_start_ms = result.allocation.t_start_ms;
        result.comm_ms = result.allocation.t_start_ms;
    } else {
        result.schedule = run_gated(result.dag, profile, ranks,
                                    result.allocation.release_ms, params);
        result.comm_ms =
            *std::max_element(result.release_ms.begin(), result.release_ms.end());
    }
    result.makespan_ms = result.schedule.makespan_ms;
    result.compute_ms = result.makespan_ms - result.comm_ms;

    result.utilization.assign(cfg.cores, 0.0);
    if (result.makespan_ms <= 0.0)
        throw StructuralError("run_experiment: zero makespan");
    for (int v = 0; v < result.dag.size(); ++v) {
        const JobRecord& rec = result.schedule.jobs[v];
        result.utilization[rec.core] += rec.finish_ms - rec.start_ms;
    }
    for (double& u : result.utilization) u /= result.makespan_ms;
    return result;
}

double gain_percent(double rtfs_makespan_ms, double pacs_makespan_ms) {
    return (rtfs_makespan_ms - pacs_makespan_ms) / rtfs_makespan_ms * 100.0;
}

Metrics compute_metrics(const ExperimentConfig& cfg, const ExperimentResult& result) {
    Metrics m;
    m.config_hash = config_hash(cfg);
    m.mode = result.mode;
    m.seed = result.seed;
    m.makespan_ms = result.makespan_ms;
    m.t_start_ms = result.t_start_ms;
    m.comm_ms = result.comm_ms;
    m.compute_ms = result.compute_ms;
    m.release_ms = result.release_ms;
    m.utilization = result.utilization;
    return m;
}

std::string metrics_to_json(const Metrics& metrics) {
    json doc = {
        {"config_hash", metrics.config_hash},
        {"mode", to_string(metrics.mode)},
        {"seed", metrics.seed},
        {"makespan_ms", metrics.makespan_ms},
        {"comm_ms", metrics.comm_ms},
        {"compute_ms", metrics.compute_ms},
        {"releases_ms", metrics.release_ms},
        {"utilization", metrics.utilization},
    };
    if (metrics.t_start_ms) doc["t_start_ms"] = *metrics.t_start_ms;
    if (metrics.gain_pct) doc["gain_pct"] = *metrics.gain_pct;
    return doc.dump(2);
}

SweepDimension sweep_dimension_from_string(const std::string& name) {
    if (name == "cores") return SweepDimension::Cores;
    if (name == "subcarriers") return SweepDimension::Subcarriers;
    if (name == "latency_scale") return SweepDimension::LatencyScale;
    if (name == "b_max") return SweepDimension::BMax;
    if (name == "token_vector") return SweepDimension::TokenVector;
    if (name == "compression_vector") return SweepDimension::CompressionVector;
    throw ConfigError("unknown sweep dimension '" + name + "'");
}

const char* to_string(SweepDimension dim) {
    switch (dim) {
    case SweepDimension::Cores: return "cores";
    case SweepDimension::Subcarriers: return "subcarriers";
    case SweepDimension::LatencyScale: return "latency_scale";
    case SweepDimension::BMax: return "b_max";
    case SweepDimension::TokenVector: return "token_vector";
    case SweepDimension::CompressionVector: return "compression_vector";
    }
    return "?";
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& base,
                                   SweepDimension dimension, const SweepValue& value) {
    ExperimentConfig cfg = base;
    switch (dimension) {
    case SweepDimension::Cores:
        cfg.cores = static_cast<int>(value.scalar);
        break;
    case SweepDimension::Subcarriers:
        cfg.subcarriers = static_cast<int>(value.scalar);
        break;
    case SweepDimension::LatencyScale:
        cfg.latency_scale = value.scalar;
        break;
    case SweepDimension::BMax:
        cfg.b_max = value.scalar;
        break;
    case SweepDimension::TokenVector:
        cfg.token_sizes.assign(value.vector.begin(), value.vector.end());
        break;
    case SweepDimension::CompressionVector:
        cfg.compression = value.vector;
        break;
    }
    cfg.validate();
    return cfg;
}

SweepResult sweep(const ExperimentConfig& base, SweepDimension dimension,
                  const std::vector<SweepValue>& values, int seed_count,
                  int max_parallel) {
    if (values.empty()) throw ConfigError("sweep: values must be nonempty");
    if (seed_count < 1) throw ConfigError("sweep: seed count must be >= 1");

    SweepResult result;
    result.dimension = dimension;
    result.values = values;
    const int n_cells = static_cast<int>(values.size()) * seed_count;
    result.cells.resize(n_cells);

#ifdef _OPENMP
    const int threads = max_parallel > 0 ? max_parallel : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#else
    (void)max_parallel;
#endif
    for (int i = 0; i < n_cells; ++i) {
        const int vi = i / seed_count;
        const int si = i % seed_count;
        SweepCell& cell = result.cells[i];
        cell.value_index = vi;
        cell.seed_index = si;
        // seed depends only on the seed index so a given seed row is
        // comparable across sweep values (same trace prefix, same profile)
        cell.seed = derive_seed(base.seed, 0, static_cast<std::uint64_t>(si));
        try {
            ExperimentConfig cfg = apply_sweep_value(base, dimension, values[vi]);
            cfg.seed = cell.seed;
            cfg.mode = Mode::RTFS;
            const ExperimentResult rtfs = run_experiment(cfg);
            cfg.mode = Mode::PACS;
            const ExperimentResult pacs = run_experiment(cfg);
            cell.feasible = true;
            cell.rtfs_makespan_ms = rtfs.makespan_ms;
            cell.pacs_makespan_ms = pacs.makespan_ms;
            cell.rtfs_comm_ms = rtfs.comm_ms;
            cell.pacs_comm_ms = pacs.comm_ms;
            cell.rtfs_compute_ms = rtfs.compute_ms;
            cell.pacs_compute_ms = pacs.compute_ms;
            cell.gain_pct = gain_percent(rtfs.makespan_ms, pacs.makespan_ms);
        } catch (const std::exception& e) {
            cell.feasible = false;
            cell.error = e.what();
        }
    }

    for (size_t vi = 0; vi < values.size(); ++vi) {
        for (Mode mode : {Mode::RTFS, Mode::PACS}) {
            SweepSummaryRow row;
            row.value_label = values[vi].label;
            row.mode = mode;
            std::vector<double> spans;
            double gain_sum = 0.0;
            for (int si = 0; si < seed_count; ++si) {
                const SweepCell& cell = result.cells[vi * seed_count + si];
                if (!cell.feasible) continue;
                spans.push_back(mode == Mode::RTFS ? cell.rtfs_makespan_ms
                                                   : cell.pacs_makespan_ms);
                gain_sum += cell.gain_pct;
            }
            row.feasible_cells = static_cast<int>(spans.size());
            if (!spans.empty()) {
                double mean = 0.0;
                for (double s : spans) mean += s;
                mean /= spans.size();
                double var = 0.0;
                for (double s : spans) var += (s - mean) * (s - mean);
                row.mean_makespan_ms = mean;
                row.std_makespan_ms = std::sqrt(var / spans.size());
                row.mean_gain_pct = gain_sum / spans.size();
            }
            result.summary.push_back(row);
        }
    }
    return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    out << "dimension,value,seed_index,seed,mode,feasible,makespan_ms,comm_ms,"
           "compute_ms,gain_pct\n";
    const int seed_count =
        static_cast<int>(result.cells.size() / result.values.size());
    for (const auto& cell : result.cells) {
        for (Mode mode : {Mode::RTFS, Mode::PACS}) {
            out << to_string(result.dimension) << ','
                << result.values[cell.value_index].label << ',' << cell.seed_index
                << ',' << cell.seed << ',' << to_string(mode) << ','
                << (cell.feasible ? 1 : 0) << ',';
            if (cell.feasible) {
                const bool rtfs = mode == Mode::RTFS;
                out << (rtfs ? cell.rtfs_makespan_ms : cell.pacs_makespan_ms) << ','
                    << (rtfs ? cell.rtfs_comm_ms : cell.pacs_comm_ms) << ','
                    << (rtfs ? cell.rtfs_compute_ms : cell.pacs_compute_ms) << ','
                    << cell.gain_pct;
            } else {
                out << ",,,";
            }
            out << '\n';
        }
    }
    (void)seed_count;
}

void write_sweep_summary_csv(const SweepResult& result, std::ostream& out) {
    out << "value,mode,cells,mean_makespan_ms,std_makespan_ms,mean_gain_pct\n";
    for (const auto& row : result.summary)
        out << row.value_label << ',' << to_string(row.mode) << ','
            << row.feasible_cells << ',' << row.mean_makespan_ms << ','
            << row.std_makespan_ms << ',' << row.mean_gain_pct << '\n';
}

std::vector<GridCellSummary> run_token_compression_grid(
    const ExperimentConfig& base, const std::vector<std::vector<int>>& token_vectors,
    const std::vector<std::vector<double>>& compression_vectors, int seed_count,
    int max_parallel) {
    const int n_tokens = static_cast<int>(token_vectors.size());
    const int n_comps = static_cast<int>(compression_vectors.size());
    const int n_cells = n_tokens * n_comps;
    const int n_runs = n_cells * seed_count;

    struct Run {
        bool feasible = false;
        double rtfs = 0.0, pacs = 0.0;
    };
    std::vector<Run> runs(n_runs);

#ifdef _OPENMP
    const int threads = max_parallel > 0 ? max_parallel : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#else
    (void)max_parallel;
#endif
    for (int i = 0; i < n_runs; ++i) {
        const int cell = i / seed_count;
        const int si = i % seed_count;
        try {
            ExperimentConfig cfg = base;
            cfg.token_sizes = token_vectors[cell / n_comps];
            cfg.compression = compression_vectors[cell % n_comps];
            cfg.seed = derive_seed(base.seed, static_cast<std::uint64_t>(cell),
                                   static_cast<std::uint64_t>(si));
            cfg.mode = Mode::RTFS;
            runs[i].rtfs = run_experiment(cfg).makespan_ms;
            cfg.mode = Mode::PACS;
            runs[i].pacs = run_experiment(cfg).makespan_ms;
            runs[i].feasible = true;
        } catch (const std::exception&) {
            runs[i].feasible = false;
        }
    }

    std::vector<GridCellSummary> grid(n_cells);
    for (int cell = 0; cell < n_cells; ++cell) {
        GridCellSummary& s = grid[cell];
        s.token_index = cell / n_comps;
        s.compression_index = cell % n_comps;
        double gain_sum = 0.0;
        for (int si = 0; si < seed_count; ++si) {
            const Run& run = runs[cell * seed_count + si];
            if (!run.feasible) continue;
            s.feasible_cells++;
            s.mean_rtfs_ms += run.rtfs;
            s.mean_pacs_ms += run.pacs;
            gain_sum += gain_percent(run.rtfs, run.pacs);
        }
        if (s.feasible_cells > 0) {
            s.mean_rtfs_ms /= s.feasible_cells;
            s.mean_pacs_ms /= s.feasible_cells;
            s.mean_gain_pct = gain_sum / s.feasible_cells;
        }
    }
    return grid;
}

namespace {

std::string join_vector(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i)
        s += (i ? ":" : "") + std::to_string(v[i]);
    return s;
}

std::string join_vector(const std::vector<double>& v) {
    std::ostringstream s;
    for (size_t i = 0; i < v.size(); ++i) s << (i ? ":" : "") << v[i];
    return s.str();
}

} // namespace

void write_grid_csv(const std::vector<GridCellSummary>& grid,
                    const std::vector<std::vector<int>>& token_vectors,
                    const std::vector<std::vector<double>>& compression_vectors,
                    std::ostream& out) {
    out << "token_vector,compression_vector,cells,mean_rtfs_ms,mean_pacs_ms,"
           "mean_gain_pct\n";
    for (const auto& cell : grid)
        out << join_vector(token_vectors[cell.token_index]) << ','
            << join_vector(compression_vectors[cell.compression_index]) << ','
            << cell.feasible_cells << ',' << cell.mean_rtfs_ms << ','
            << cell.mean_pacs_ms << ',' << cell.mean_gain_pct << '\n';
}

std::vector<std::vector<int>> benchmark_token_vectors() {
    return {
        {128, 128, 128, 128, 128, 128},
        {64, 64, 128, 128, 256, 256},
        {64, 128, 256, 128, 192, 128},
        {512, 128, 256, 128, 192, 128},
        {512, 128, 256, 384, 192, 64},
    };
}

std::vector<std::vector<double>> benchmark_compression_vectors() {
    return {
        {0.50, 0.50, 0.50, 0.50, 0.50, 0.50},
        {0.25, 0.25, 0.50, 0.50, 0.50, 0.50},
        {0.25, 0.25, 0.80, 0.60, 0.60, 0.60},
        {0.25, 0.25, 0.50, 0.50, 0.80, 0.80},
        {0.50, 0.50, 0.50, 0.50, 0.80, 0.80},
    };
}

} // namespace winp
