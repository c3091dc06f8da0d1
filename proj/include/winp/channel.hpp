#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "winp/workload.hpp"

namespace winp {

// Per-(slice, subcarrier, slot) achievable uplink rates in kbit/s.
// One RB carries rate * slot_ms bits (kbit/s x ms = bits).
struct RateTrace {
    int slices = 0;      // K
    int subcarriers = 0; // F
    int slots = 0;       // T
    double slot_ms = 1.0;
    std::vector<double> rates; // [k][f][t] flattened

    double& at(int k, int f, int t) {
        return rates[(static_cast<size_t>(k) * subcarriers + f) * slots + t];
    }
    double at(int k, int f, int t) const {
        return rates[(static_cast<size_t>(k) * subcarriers + f) * slots + t];
    }
};

struct RatePredictor {
    std::vector<std::vector<double>> slot_mean;  // u_bar[k][t], kbit/s
    std::vector<std::vector<double>> suffix_mean; // u_hat[k][t], floored
    double floor = 1e-6;
};

// RB assignment: each (subcarrier, slot) cell owned by at most one slice.
struct RbAllocation {
    int slices = 0;
    int subcarriers = 0;
    int slots = 0;
    std::vector<std::int16_t> owner; // [f][t], -1 when unassigned

    void init(int k, int f, int t) {
        slices = k;
        subcarriers = f;
        slots = t;
        owner.assign(static_cast<size_t>(f) * t, -1);
    }
    std::int16_t& cell(int f, int t) {
        return owner[static_cast<size_t>(f) * slots + t];
    }
    std::int16_t cell(int f, int t) const {
        return owner[static_cast<size_t>(f) * slots + t];
    }
    bool assigned(int k, int f, int t) const { return cell(f, t) == k; }
};

struct SliceDelivery {
    std::vector<double> cumulative_bits;   // per slot
    std::optional<int> arrival_slot;
    double release_ms = 0.0;               // (arrival_slot + 1) * slot_ms
};

struct DeliveryResult {
    std::vector<SliceDelivery> slices;
    bool feasible() const {
        for (const auto& s : slices)
            if (!s.arrival_slot) return false;
        return true;
    }
};

// i.i.d. Uniform(lo, hi) rates. Each (slice, subcarrier) pair uses its own
// substream, so a trace at F' subcarriers is the prefix of the trace at any
// F >= F' under the same seed.
RateTrace generate_rate_trace(int slices, int subcarriers, int slots,
                              double rate_lo, double rate_hi, double slot_ms,
                              std::uint64_t seed);

// u_bar[k][t] = mean over subcarriers of the instantaneous rates.
std::vector<std::vector<double>> slot_mean_rates(const RateTrace& trace);

// u_hat[k][t] = max(mean of u_bar over [t, T), floor); reverse prefix sums.
RatePredictor suffix_mean_predictor(const std::vector<std::vector<double>>& slot_mean,
                                    double floor);

// Accumulate delivered bits per slot under an allocation; arrival slot is the
// first slot whose end meets the payload, release at end of that slot.
// Undelivered slices report arrival_slot = nullopt.
DeliveryResult replay_delivery(const RateTrace& trace, const RbAllocation& allocation,
                               const std::vector<Payload>& payloads);

// CSV with header "k,f,t,value".
void write_trace_csv(const RateTrace& trace, std::ostream& out);
void write_allocation_cells_csv(const RbAllocation& allocation, std::ostream& out);

} // namespace winp
