#include "winp/comm_sched.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <string>

#include "winp/errors.hpp"

namespace winp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> unfinished(const std::vector<double>& remaining) {
    std::vector<int> out;
    for (size_t k = 0; k < remaining.size(); ++k)
        if (remaining[k] > 0.0) out.push_back(static_cast<int>(k));
    return out;
}

void finalize(AllocationResult& result, const RateTrace& trace,
              const std::vector<double>& remaining, const std::vector<int>& arrival,
              const char* who) {
    if (auto bad = unfinished(remaining); !bad.empty()) {
        std::string msg = std::string(who) + ": trace exhausted with undelivered slices";
        for (int k : bad) msg += " " + std::to_string(k);
        throw InfeasibleError(msg, bad);
    }
    result.arrival_slots = arrival;
    result.release_ms.resize(arrival.size());
    int last = 0;
    for (size_t k = 0; k < arrival.size(); ++k) {
        result.release_ms[k] = (arrival[k] + 1) * trace.slot_ms;
        last = std::max(last, arrival[k]);
    }
    result.slots_used = last + 1;
    result.t_start_ms = (last + 1) * trace.slot_ms;
}

} // namespace

AllocationResult rtfs_allocate(const RateTrace& trace, const RatePredictor& predictor,
                               const std::vector<Payload>& payloads) {
    const int K = trace.slices;
    const int F = trace.subcarriers;
    const int T = trace.slots;
    const double delta = trace.slot_ms;

    AllocationResult result;
    result.allocation.init(K, F, T);

    std::vector<double> remaining(K);
    for (int k = 0; k < K; ++k) {
        if (payloads[k].bits <= 0.0)
            throw ConfigError("rtfs_allocate: payloads must be positive");
        remaining[k] = payloads[k].bits;
    }
    std::vector<int> arrival(K, -1);
    std::vector<double> tail(K, 0.0);

    for (int t = 0; t < T && !unfinished(remaining).empty(); ++t) {
        for (int k = 0; k < K; ++k)
            tail[k] = remaining[k] > 0.0
                          ? remaining[k] / predictor.suffix_mean[k][t]
                          : 0.0;

        for (int f = 0; f < F; ++f) {
            int best_k = -1;
            double best_obj = kInf;
            double best_tail = -kInf;
            for (int k = 0; k < K; ++k) {
                if (remaining[k] <= 0.0) continue;
                const double bits = delta * trace.at(k, f, t);
                const double trial_tail =
                    std::max(0.0, remaining[k] - bits) / predictor.suffix_mean[k][t];
                double obj = trial_tail;
                for (int j = 0; j < K; ++j)
                    if (j != k) obj = std::max(obj, tail[j]);
                // ties: serve the worst own tail, then the lower index
                if (obj < best_obj || (obj == best_obj && tail[k] > best_tail)) {
                    best_obj = obj;
                    best_tail = tail[k];
                    best_k = k;
                }
            }
            if (best_k < 0) break; // every slice finished mid-slot
            result.allocation.cell(f, t) = static_cast<std::int16_t>(best_k);
            remaining[best_k] =
                std::max(0.0, remaining[best_k] - delta * trace.at(best_k, f, t));
            tail[best_k] = remaining[best_k] / predictor.suffix_mean[best_k][t];
        }

        for (int k = 0; k < K; ++k)
            if (remaining[k] <= 0.0 && arrival[k] < 0) arrival[k] = t;
    }

    finalize(result, trace, remaining, arrival, "rtfs_allocate");
    return result;
}

MakespanPrediction predict_makespan(double now_ms, const std::vector<double>& remaining_bits,
                                    const std::vector<double>& rate_estimate,
                                    const Dag& dag, const std::vector<double>& mean_latency,
                                    const std::vector<int>& topo) {
    MakespanPrediction pred;
    pred.arrival_ms.resize(remaining_bits.size());
    for (size_t k = 0; k < remaining_bits.size(); ++k)
        pred.arrival_ms[k] = remaining_bits[k] <= 0.0
                                 ? now_ms
                                 : now_ms + remaining_bits[k] / rate_estimate[k];

    pred.finish_ms.assign(dag.size(), 0.0);
    for (int v : topo) {
        if (dag.preds[v].empty()) {
            const int slice = dag.jobs[v].slice;
            const double gate =
                slice >= 0 ? std::max(now_ms, pred.arrival_ms[slice]) : now_ms;
            pred.finish_ms[v] = gate + mean_latency[v];
        } else {
            double latest = 0.0;
            for (int u : dag.preds[v]) latest = std::max(latest, pred.finish_ms[u]);
            pred.finish_ms[v] = mean_latency[v] + latest;
        }
    }
    pred.makespan_ms =
        dag.output_id >= 0 ? pred.finish_ms[dag.output_id]
                           : *std::max_element(pred.finish_ms.begin(), pred.finish_ms.end());
    return pred;
}

AllocationResult pacs_allocate(const RateTrace& trace, const RatePredictor& predictor,
                               const std::vector<Payload>& payloads, const Dag& dag,
                               const std::vector<double>& mean_latency) {
    const int K = trace.slices;
    const int F = trace.subcarriers;
    const int T = trace.slots;
    const double delta = trace.slot_ms;
    const std::vector<int> topo = dag.topo_order();

    AllocationResult result;
    result.allocation.init(K, F, T);

    std::vector<double> remaining(K);
    for (int k = 0; k < K; ++k) {
        if (payloads[k].bits <= 0.0)
            throw ConfigError("pacs_allocate: payloads must be positive");
        remaining[k] = payloads[k].bits;
    }
    std::vector<int> arrival(K, -1);
    std::vector<double> rates(K), trial(K);

    for (int t = 0; t < T && !unfinished(remaining).empty(); ++t) {
        const double now_ms = t * delta;
        for (int k = 0; k < K; ++k) rates[k] = predictor.suffix_mean[k][t];

        double base =
            predict_makespan(now_ms, remaining, rates, dag, mean_latency, topo)
                .makespan_ms;

        for (int f = 0; f < F; ++f) {
            int best_k = -1;
            double best_gain = -kInf;
            double best_arrival = -kInf;
            for (int k = 0; k < K; ++k) {
                if (remaining[k] <= 0.0) continue;
                const double bits = delta * trace.at(k, f, t);
                trial = remaining;
                trial[k] = std::max(0.0, trial[k] - bits);
                const double tried =
                    predict_makespan(now_ms, trial, rates, dag, mean_latency, topo)
                        .makespan_ms;
                const double gain = base - tried;
                const double arr = now_ms + remaining[k] / rates[k];
                // ties: serve the latest predicted arrival, then the lower index
                if (gain > best_gain || (gain == best_gain && arr > best_arrival)) {
                    best_gain = gain;
                    best_arrival = arr;
                    best_k = k;
                }
            }
            if (best_k < 0) break;
            result.allocation.cell(f, t) = static_cast<std::int16_t>(best_k);
            remaining[best_k] =
                std::max(0.0, remaining[best_k] - delta * trace.at(best_k, f, t));
            base = predict_makespan(now_ms, remaining, rates, dag, mean_latency, topo)
                       .makespan_ms;
        }

        for (int k = 0; k < K; ++k)
            if (remaining[k] <= 0.0 && arrival[k] < 0) arrival[k] = t;
    }

    finalize(result, trace, remaining, arrival, "pacs_allocate");
    return result;
}

void write_allocation_csv(const RbAllocation& allocation, std::ostream& out) {
    out << "t,f,k\n";
    for (int t = 0; t < allocation.slots; ++t)
        for (int f = 0; f < allocation.subcarriers; ++f)
            if (allocation.cell(f, t) >= 0)
                out << t << ',' << f << ',' << allocation.cell(f, t) << '\n';
}

} // namespace winp
