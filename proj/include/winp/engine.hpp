#pragma once

#include <iosfwd>
#include <vector>

#include "winp/dag.hpp"
#include "winp/workload.hpp"

namespace winp {

// Proportional NoC sharing: alpha_c = b_c / sum(b) * budget when the demand
// sum exceeds eps, equal split otherwise.
std::vector<double> bandwidth_shares(const std::vector<double>& demands,
                                     double budget, double eps);

struct JobRecord {
    int core = -1;
    double start_ms = 0.0;
    double finish_ms = 0.0;
};

struct IntervalRecord {
    double t_a = 0.0;
    double t_b = 0.0;
    int core = -1;
    int job = -1;
    double share = 0.0;
};

struct ScheduleTrace {
    std::vector<JobRecord> jobs;
    std::vector<IntervalRecord> intervals;
    double makespan_ms = 0.0;
};

struct EngineParams {
    double b_max = 1.0;
    double eps = 1e-9;
};

// Wait-all engine: the clock starts at t_start (>= every gate) and ready jobs
// are dispatched to idle cores by (-rank, mean latency, id); the remaining
// work L*b of each running job drains at its bandwidth share.
ScheduleTrace run_waitall(const Dag& dag, const ProfileTable& profile,
                          const RankMap& ranks, double t_start_ms,
                          const std::vector<double>& gates_ms,
                          const EngineParams& params);

// Slice-gated engine: Embed jobs become ready only once their slice gate has
// passed; time advances to the earlier of the next completion and the next
// gate boundary.
ScheduleTrace run_gated(const Dag& dag, const ProfileTable& profile,
                        const RankMap& ranks, const std::vector<double>& gates_ms,
                        const EngineParams& params);

// Fixed-step reference simulator with the identical dispatch rule. Kept
// serial and simple; used by the tests and the benchmark as an independent
// check of the event-driven engine.
ScheduleTrace run_reference_fixed_step(const Dag& dag, const ProfileTable& profile,
                                       const RankMap& ranks, double t_start_ms,
                                       const std::vector<double>& gates_ms,
                                       const EngineParams& params, bool gated,
                                       double step_ms = 1e-3);

// Line-delimited JSON: job records then interval records.
void write_schedule_jsonl(const ScheduleTrace& trace, const Dag& dag, std::ostream& out);

// CSV "t_a,t_b,core,share".
void write_bandwidth_csv(const ScheduleTrace& trace, std::ostream& out);

} // namespace winp
