#include "winp/channel.hpp"

#include <algorithm>
#include <ostream>

#include "winp/errors.hpp"
#include "winp/rng.hpp"

namespace winp {

RateTrace generate_rate_trace(int slices, int subcarriers, int slots,
                              double rate_lo, double rate_hi, double slot_ms,
                              std::uint64_t seed) {
    if (rate_lo <= 0.0 || rate_hi < rate_lo)
        throw ConfigError("rate trace: need 0 < lo <= hi");
    RateTrace trace;
    trace.slices = slices;
    trace.subcarriers = subcarriers;
    trace.slots = slots;
    trace.slot_ms = slot_ms;
    trace.rates.resize(static_cast<size_t>(slices) * subcarriers * slots);
    for (int k = 0; k < slices; ++k) {
        for (int f = 0; f < subcarriers; ++f) {
            Rng rng(seed, "channel", static_cast<std::uint64_t>(k) * 100003 + f);
            for (int t = 0; t < slots; ++t)
                trace.at(k, f, t) = rng.uniform(rate_lo, rate_hi);
        }
    }
    return trace;
}

std::vector<std::vector<double>> slot_mean_rates(const RateTrace& trace) {
    std::vector<std::vector<double>> mean(
        trace.slices, std::vector<double>(trace.slots, 0.0));
    for (int k = 0; k < trace.slices; ++k) {
        for (int t = 0; t < trace.slots; ++t) {
            double sum = 0.0;
            for (int f = 0; f < trace.subcarriers; ++f) sum += trace.at(k, f, t);
            mean[k][t] = sum / trace.subcarriers;
        }
    }
    return mean;
}

RatePredictor suffix_mean_predictor(const std::vector<std::vector<double>>& slot_mean,
                                    double floor) {
    if (floor <= 0.0) throw ConfigError("predictor: floor must be > 0");
    RatePredictor pred;
    pred.floor = floor;
    pred.slot_mean = slot_mean;
    pred.suffix_mean.resize(slot_mean.size());
    for (size_t k = 0; k < slot_mean.size(); ++k) {
        const auto& row = slot_mean[k];
        const int slots = static_cast<int>(row.size());
        auto& out = pred.suffix_mean[k];
        out.assign(slots, floor);
        double suffix_sum = 0.0;
        for (int t = slots - 1; t >= 0; --t) {
            suffix_sum += row[t];
            out[t] = std::max(suffix_sum / (slots - t), floor);
        }
    }
    return pred;
}

DeliveryResult replay_delivery(const RateTrace& trace, const RbAllocation& allocation,
                               const std::vector<Payload>& payloads) {
    if (allocation.slices != trace.slices || allocation.slots != trace.slots ||
        allocation.subcarriers != trace.subcarriers)
        throw ConfigError("replay: allocation dims do not match trace");
    if (static_cast<int>(payloads.size()) != trace.slices)
        throw ConfigError("replay: payload count does not match trace");

    DeliveryResult result;
    result.slices.resize(trace.slices);
    for (int k = 0; k < trace.slices; ++k) {
        auto& slice = result.slices[k];
        slice.cumulative_bits.assign(trace.slots, 0.0);
        double acc = 0.0;
        for (int t = 0; t < trace.slots; ++t) {
            for (int f = 0; f < trace.subcarriers; ++f)
                if (allocation.assigned(k, f, t))
                    acc += trace.at(k, f, t) * trace.slot_ms;
            slice.cumulative_bits[t] = acc;
            if (!slice.arrival_slot && acc >= payloads[k].bits) {
                slice.arrival_slot = t;
                slice.release_ms = (t + 1) * trace.slot_ms;
            }
        }
    }
    return result;
}

void write_trace_csv(const RateTrace& trace, std::ostream& out) {
    out << "k,f,t,value\n";
    for (int k = 0; k < trace.slices; ++k)
        for (int f = 0; f < trace.subcarriers; ++f)
            for (int t = 0; t < trace.slots; ++t)
                out << k << ',' << f << ',' << t << ',' << trace.at(k, f, t) << '\n';
}

void write_allocation_cells_csv(const RbAllocation& allocation, std::ostream& out) {
    out << "k,f,t,value\n";
    for (int f = 0; f < allocation.subcarriers; ++f)
        for (int t = 0; t < allocation.slots; ++t)
            if (allocation.cell(f, t) >= 0)
                out << allocation.cell(f, t) << ',' << f << ',' << t << ",1\n";
}

} // namespace winp
