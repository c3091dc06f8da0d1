#pragma once

#include <vector>

#include "winp/channel.hpp"
#include "winp/dag.hpp"

namespace winp {

struct AllocationResult {
    RbAllocation allocation;
    std::vector<int> arrival_slots;   // per slice
    std::vector<double> release_ms;   // (arrival + 1) * slot_ms
    double t_start_ms = 0.0;          // wait-all start (RTFS)
    int slots_used = 0;
};

// Tail-minimizing greedy: each RB goes to the candidate whose one-step update
// minimizes the maximum predicted residual transmission time. Ties go to the
// candidate with the larger own tail, then the lower slice index.
AllocationResult rtfs_allocate(const RateTrace& trace, const RatePredictor& predictor,
                               const std::vector<Payload>& payloads);

struct MakespanPrediction {
    std::vector<double> arrival_ms;  // per slice
    std::vector<double> finish_ms;   // per job
    double makespan_ms = 0.0;        // finish of the output job
};

// Contention-free max-plus recursion over the DAG. Entry jobs of slice k are
// gated by the arrival estimate A_k = t (if R_k <= 0) or t + R_k / u_hat_k;
// interior jobs finish at mean latency plus the latest predecessor finish.
// R in bits, rates in kbit/s (== bits per ms), times in ms.
MakespanPrediction predict_makespan(double now_ms, const std::vector<double>& remaining_bits,
                                    const std::vector<double>& rate_estimate,
                                    const Dag& dag, const std::vector<double>& mean_latency,
                                    const std::vector<int>& topo);

// Predictor-driven greedy: each RB goes to the slice whose trial update gives
// the largest reduction of the predicted makespan. Ties go to the slice with
// the larger arrival estimate, then the lower index.
AllocationResult pacs_allocate(const RateTrace& trace, const RatePredictor& predictor,
                               const std::vector<Payload>& payloads, const Dag& dag,
                               const std::vector<double>& mean_latency);

// Allocator export: one "t,f,k" row per assigned RB.
void write_allocation_csv(const RbAllocation& allocation, std::ostream& out);

} // namespace winp
