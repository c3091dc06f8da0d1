#include "winp/workload.hpp"

#include <algorithm>
#include <numeric>

#include "winp/errors.hpp"
#include "winp/rng.hpp"

namespace winp {

void WorkloadGenConfig::validate() const {
    if (token_sizes.size() < 2)
        throw ConfigError("workload: K must be >= 2");
    if (compression.size() != token_sizes.size())
        throw ConfigError("workload: compression length " +
                          std::to_string(compression.size()) +
                          " != K=" + std::to_string(token_sizes.size()));
    for (int n : token_sizes)
        if (n < 1) throw ConfigError("workload: token size must be >= 1");
    for (double k : compression)
        if (!(k > 0.0 && k <= 1.0))
            throw ConfigError("workload: compression must be in (0, 1]");
    if (overhead < 1.0) throw ConfigError("workload: overhead must be >= 1");
    if (core_count < 1) throw ConfigError("workload: core count must be >= 1");
    if (latency_scale <= 0.0)
        throw ConfigError("workload: latency_scale must be > 0");
}

std::vector<Payload> compute_payloads(const WorkloadGenConfig& cfg) {
    cfg.validate();
    std::vector<Payload> out(cfg.token_sizes.size());
    for (size_t k = 0; k < out.size(); ++k) {
        out[k].bytes = cfg.token_sizes[k] * static_cast<double>(cfg.feature_dim) *
                       cfg.bytes_per_element * cfg.compression[k] * cfg.overhead;
        out[k].bits = 8.0 * out[k].bytes;
    }
    return out;
}

double token_scale(const Dag& dag, const WorkloadGenConfig& cfg, int job_id) {
    const Job& job = dag.jobs[job_id];
    if (job.slice >= 0) return cfg.token_sizes[job.slice];
    return std::accumulate(cfg.token_sizes.begin(), cfg.token_sizes.end(), 0.0);
}

ProfileTable generate_profile(const Dag& dag, const WorkloadGenConfig& cfg) {
    cfg.validate();
    const int V = dag.size();
    const int C = cfg.core_count;

    Rng speed_rng(cfg.seed, "core-speed");
    std::vector<double> core_speed(C);
    for (int c = 0; c < C; ++c) {
        double u = speed_rng.uniform(cfg.speed_jitter_range[0],
                                     cfg.speed_jitter_range[1]);
        core_speed[c] = std::max(1.0 + u, 0.7);
    }

    Rng jitter_rng(cfg.seed, "profile-jitter");
    Rng bw_rng(cfg.seed, "bw-jitter");

    ProfileTable table;
    table.latency.assign(V, std::vector<double>(C, 0.0));
    table.bandwidth.assign(V, std::vector<double>(C, 0.0));
    table.work.assign(V, std::vector<double>(C, 0.0));
    table.mean_latency.assign(V, 0.0);

    for (int v = 0; v < V; ++v) {
        const double s = token_scale(dag, cfg, v);
        const OpCoefficients& g =
            cfg.op_coefficients[static_cast<int>(dag.jobs[v].kind)];
        const double base = g.linear * s + g.quadratic * s * s;
        for (int c = 0; c < C; ++c) {
            double xi = jitter_rng.uniform(cfg.jitter_range[0], cfg.jitter_range[1]);
            table.latency[v][c] =
                base * xi / core_speed[c] * cfg.latency_scale * cfg.slot_ms;
        }
        const double bj = bw_rng.uniform(cfg.bw_jitter_range[0], cfg.bw_jitter_range[1]);
        const double demand = std::clamp(
            cfg.bw_base[static_cast<int>(dag.jobs[v].kind)] + cfg.bw_slope * s + bj,
            0.2, 1.0);
        for (int c = 0; c < C; ++c) {
            table.bandwidth[v][c] = demand;
            table.work[v][c] = table.latency[v][c] * table.bandwidth[v][c];
            table.mean_latency[v] += table.latency[v][c];
        }
        table.mean_latency[v] /= C;
    }
    return table;
}

RankMap upward_ranks(const Dag& dag, const ProfileTable& profile) {
    const std::vector<int> order = dag.topo_order();
    RankMap rank(dag.size(), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int v = *it;
        double best = 0.0;
        for (int s : dag.succs[v]) best = std::max(best, rank[s]);
        rank[v] = profile.mean_latency[v] + best;
    }
    return rank;
}

} // namespace winp
