// Timing comparison: OpenMP sweep vs serial sweep, and the event-driven
// engine vs the fixed-step reference on the default instance.
#include <chrono>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "winp/orchestrator.hpp"

using namespace winp;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

int main() {
    ExperimentConfig cfg;
    cfg.trace_slots = 2000;

    std::vector<SweepValue> values;
    for (double f : {8.0, 16.0, 32.0})
        values.push_back({f, {}, std::to_string(static_cast<int>(f))});

    auto t0 = Clock::now();
    sweep(cfg, SweepDimension::Subcarriers, values, 8, 1);
    const double serial_s = seconds_since(t0);

    t0 = Clock::now();
    sweep(cfg, SweepDimension::Subcarriers, values, 8, 0);
    const double parallel_s = seconds_since(t0);

#ifdef _OPENMP
    std::cout << "threads: " << omp_get_max_threads() << "\n";
#endif
    std::cout << "sweep 3x8 cells: serial " << serial_s << " s, parallel "
              << parallel_s << " s, speedup " << serial_s / parallel_s << "x\n";

    const Dag dag = build_multimodal_dag(cfg.modality_count());
    const WorkloadGenConfig wcfg = cfg.workload_config();
    const ProfileTable profile = generate_profile(dag, wcfg);
    const RankMap ranks = upward_ranks(dag, profile);
    const std::vector<double> gates(cfg.modality_count(), 0.0);
    const EngineParams params{cfg.b_max, cfg.engine_eps};

    t0 = Clock::now();
    ScheduleTrace event;
    for (int i = 0; i < 100; ++i)
        event = run_waitall(dag, profile, ranks, 0.0, gates, params);
    const double event_s = seconds_since(t0) / 100;

    t0 = Clock::now();
    const ScheduleTrace ref =
        run_reference_fixed_step(dag, profile, ranks, 0.0, gates, params, false);
    const double ref_s = seconds_since(t0);

    std::cout << "engine on default DAG: event-driven " << event_s * 1e3
              << " ms/run (makespan " << event.makespan_ms
              << " ms), fixed-step reference " << ref_s * 1e3 << " ms/run (makespan "
              << ref.makespan_ms << " ms)\n";
    return 0;
}
