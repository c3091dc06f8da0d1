// Batch front end: single runs, sweeps and the token/compression grid.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "winp/errors.hpp"
#include "winp/orchestrator.hpp"

namespace fs = std::filesystem;
using namespace winp;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 4;

ExperimentConfig load_config(const std::string& config_path, const std::string& mode,
                             std::uint64_t seed, bool seed_set) {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{}
                                               : parse_config_file(config_path);
    if (!mode.empty() && mode != "BOTH") cfg.mode = mode_from_string(mode);
    if (seed_set) {
        cfg.seed = seed;
    } else if (const char* env = std::getenv("WINP_SEED")) {
        cfg.seed = std::strtoull(env, nullptr, 10);
    }
    cfg.validate();
    return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

void export_run(const ExperimentConfig& cfg, const ExperimentResult& result,
                const Metrics& metrics, const fs::path& dir, const std::string& suffix) {
    write_file(dir / ("metrics" + suffix + ".json"), metrics_to_json(metrics) + "\n");
    {
        std::ofstream out(dir / ("schedule" + suffix + ".jsonl"), std::ios::binary);
        write_schedule_jsonl(result.schedule, result.dag, out);
    }
    {
        std::ofstream out(dir / ("allocation" + suffix + ".csv"), std::ios::binary);
        write_allocation_csv(result.allocation.allocation, out);
    }
    {
        std::ofstream out(dir / ("bandwidth" + suffix + ".csv"), std::ios::binary);
        write_bandwidth_csv(result.schedule, out);
    }
    write_file(dir / ("config" + suffix + ".json"), config_to_json(cfg) + "\n");
}

void print_summary(const ExperimentResult& result) {
    std::cout << "mode=" << to_string(result.mode)
              << " makespan=" << result.makespan_ms << "ms"
              << " comm=" << result.comm_ms << "ms"
              << " compute=" << result.compute_ms << "ms\n";
}

std::vector<SweepValue> parse_values(SweepDimension dim, const std::string& list) {
    std::vector<SweepValue> values;
    std::stringstream ss(list);
    std::string item;
    const bool vector_dim = dim == SweepDimension::TokenVector ||
                            dim == SweepDimension::CompressionVector;
    while (std::getline(ss, item, vector_dim ? ';' : ',')) {
        if (item.empty()) continue;
        SweepValue v;
        v.label = item;
        if (vector_dim) {
            std::stringstream vs(item);
            std::string part;
            while (std::getline(vs, part, ':')) v.vector.push_back(std::stod(part));
        } else {
            v.scalar = std::stod(item);
        }
        values.push_back(v);
    }
    if (values.empty()) throw ConfigError("sweep: empty --values list");
    return values;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wireless neural processing co-scheduling simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string mode = "RTFS";
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    int jobs = 0;

    auto* run = app.add_subcommand("run", "Run one experiment and export traces");
    run->add_option("--config", config_path, "Config JSON path");
    run->add_option("--mode", mode, "RTFS, PACS or BOTH")
        ->check(CLI::IsMember({"RTFS", "PACS", "BOTH"}));
    auto* seed_opt = run->add_option("--seed", seed, "Master seed");
    run->add_option("--out", out_dir, "Output directory");

    std::string dimension = "subcarriers";
    std::string values_list;
    int seed_count = 1;
    std::string grid;

    auto* sweep_cmd = app.add_subcommand("sweep", "Paired RTFS/PACS parameter sweep");
    sweep_cmd->add_option("--config", config_path, "Config JSON path");
    sweep_cmd->add_option("--dimension", dimension,
                          "cores|subcarriers|latency_scale|b_max|token_vector|"
                          "compression_vector");
    sweep_cmd->add_option("--values", values_list,
                          "Comma list (vector dims: ';' between values, ':' inside)");
    sweep_cmd->add_option("--seeds", seed_count, "Paired seeds per value");
    sweep_cmd->add_option("--grid", grid, "'benchmark' runs the 5x5 token/compression grid");
    auto* sweep_seed_opt = sweep_cmd->add_option("--seed", seed, "Master seed");
    sweep_cmd->add_option("--out", out_dir, "Output directory");
    sweep_cmd->add_option("--jobs", jobs, "Max parallel cells (0 = all cores)");

    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(out_dir);
        if (run->parsed()) {
            ExperimentConfig cfg = load_config(config_path, mode, seed,
                                               seed_opt->count() > 0);
            if (mode == "BOTH") {
                cfg.mode = Mode::RTFS;
                ExperimentResult rtfs = run_experiment(cfg);
                Metrics m_rtfs = compute_metrics(cfg, rtfs);
                cfg.mode = Mode::PACS;
                ExperimentResult pacs = run_experiment(cfg);
                Metrics m_pacs = compute_metrics(cfg, pacs);
                const double gain = gain_percent(rtfs.makespan_ms, pacs.makespan_ms);
                m_rtfs.gain_pct = gain;
                m_pacs.gain_pct = gain;
                cfg.mode = Mode::RTFS;
                export_run(cfg, rtfs, m_rtfs, out_dir, "_rtfs");
                cfg.mode = Mode::PACS;
                export_run(cfg, pacs, m_pacs, out_dir, "_pacs");
                print_summary(rtfs);
                print_summary(pacs);
                std::cout << "gain=" << gain << "%\n";
            } else {
                ExperimentResult result = run_experiment(cfg);
                export_run(cfg, result, compute_metrics(cfg, result), out_dir, "");
                print_summary(result);
            }
        } else if (sweep_cmd->parsed()) {
            ExperimentConfig cfg = load_config(config_path, "", seed,
                                               sweep_seed_opt->count() > 0);
            if (grid == "benchmark") {
                const auto tokens = benchmark_token_vectors();
                const auto comps = benchmark_compression_vectors();
                const auto result =
                    run_token_compression_grid(cfg, tokens, comps, seed_count, jobs);
                std::ofstream out(fs::path(out_dir) / "grid_benchmark.csv",
                                  std::ios::binary);
                write_grid_csv(result, tokens, comps, out);
                std::cout << "grid cells=" << result.size()
                          << " seeds=" << seed_count << "\n";
            } else if (!grid.empty()) {
                throw ConfigError("unknown --grid '" + grid + "'");
            } else {
                const SweepDimension dim = sweep_dimension_from_string(dimension);
                const auto values = parse_values(dim, values_list);
                const SweepResult result = sweep(cfg, dim, values, seed_count, jobs);
                {
                    std::ofstream out(fs::path(out_dir) / "sweep.csv", std::ios::binary);
                    write_sweep_csv(result, out);
                }
                {
                    std::ofstream out(fs::path(out_dir) / "sweep_summary.csv",
                                      std::ios::binary);
                    write_sweep_summary_csv(result, out);
                }
                std::cout << "sweep rows=" << result.cells.size() * 2 << "\n";
            }
        }
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}
