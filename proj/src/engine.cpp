#include "winp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "winp/errors.hpp"

namespace winp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum JobState : std::uint8_t { kUnscheduled = 0, kReady, kRunning, kFinished };

struct EngineCore {
    const Dag& dag;
    const ProfileTable& profile;
    const RankMap& ranks;
    const std::vector<double>& gates;
    EngineParams params;

    std::vector<JobState> state;
    std::vector<int> ready;
    std::vector<int> core_job;    // -1 when idle
    std::vector<double> core_work; // remaining bandwidth*ms
    std::vector<int> pending_preds;
    int finished = 0;

    EngineCore(const Dag& d, const ProfileTable& p, const RankMap& r,
               const std::vector<double>& g, const EngineParams& ep)
        : dag(d), profile(p), ranks(r), gates(g), params(ep) {
        state.assign(d.size(), kUnscheduled);
        core_job.assign(p.core_count(), -1);
        core_work.assign(p.core_count(), 0.0);
        pending_preds.resize(d.size());
        for (int v = 0; v < d.size(); ++v)
            pending_preds[v] = static_cast<int>(d.preds[v].size());
    }

    bool gate_open(int v, double now) const {
        if (dag.jobs[v].kind != OperatorKind::Embed) return true;
        const int slice = dag.jobs[v].slice;
        if (slice < 0 || slice >= static_cast<int>(gates.size())) return true;
        return now + params.eps >= gates[slice];
    }

    void refresh_ready(double now) {
        for (int v = 0; v < dag.size(); ++v)
            if (state[v] == kUnscheduled && pending_preds[v] == 0 && gate_open(v, now)) {
                state[v] = kReady;
                ready.push_back(v);
            }
    }

    // Highest rank first; ties by smaller mean latency, then lower id.
    int pop_best_ready() {
        size_t best = 0;
        for (size_t i = 1; i < ready.size(); ++i) {
            const int a = ready[i], b = ready[best];
            if (ranks[a] > ranks[b] ||
                (ranks[a] == ranks[b] &&
                 (profile.mean_latency[a] < profile.mean_latency[b] ||
                  (profile.mean_latency[a] == profile.mean_latency[b] && a < b))))
                best = i;
        }
        const int v = ready[best];
        ready.erase(ready.begin() + best);
        return v;
    }

    void dispatch(double now, ScheduleTrace& trace) {
        for (int c = 0; c < static_cast<int>(core_job.size()) && !ready.empty(); ++c) {
            if (core_job[c] != -1) continue;
            const int v = pop_best_ready();
            if (trace.jobs[v].core < 0) trace.jobs[v].start_ms = now;
            trace.jobs[v].core = c;
            core_job[c] = v;
            core_work[c] = profile.latency[v][c] * profile.bandwidth[v][c];
            state[v] = kRunning;
        }
    }

    std::vector<int> running_cores() const {
        std::vector<int> run;
        for (int c = 0; c < static_cast<int>(core_job.size()); ++c)
            if (core_job[c] != -1) run.push_back(c);
        return run;
    }

    std::vector<double> shares(const std::vector<int>& run) const {
        std::vector<double> demand(run.size());
        for (size_t i = 0; i < run.size(); ++i)
            demand[i] = profile.bandwidth[core_job[run[i]]][run[i]];
        return bandwidth_shares(demand, params.b_max, params.eps);
    }

    void complete(int c, double now, ScheduleTrace& trace) {
        const int v = core_job[c];
        trace.jobs[v].finish_ms = now;
        state[v] = kFinished;
        ++finished;
        core_job[c] = -1;
        core_work[c] = 0.0;
        for (int s : dag.succs[v]) --pending_preds[s];
    }
};

ScheduleTrace run_event_driven(const Dag& dag, const ProfileTable& profile,
                               const RankMap& ranks, double start_ms,
                               const std::vector<double>& gates,
                               const EngineParams& params, bool gate_events) {
    EngineCore eng(dag, profile, ranks, gates, params);
    ScheduleTrace trace;
    trace.jobs.assign(dag.size(), {});

    double now = start_ms;
    eng.refresh_ready(now);

    const long iter_cap =
        10L * (dag.size() + static_cast<long>(gates.size())) + 1000;
    long iters = 0;
    while (eng.finished < dag.size()) {
        if (++iters > iter_cap)
            throw StructuralError("engine: event-loop iteration cap exceeded");

        eng.dispatch(now, trace);
        const std::vector<int> run = eng.running_cores();

        double t_comp = kInf;
        std::vector<double> alpha;
        if (!run.empty()) {
            alpha = eng.shares(run);
            double delta = kInf;
            for (size_t i = 0; i < run.size(); ++i)
                delta = std::min(delta, eng.core_work[run[i]] / (alpha[i] + params.eps));
            t_comp = now + delta;
        }

        double t_gate = kInf;
        if (gate_events)
            for (double g : gates)
                if (g > now + params.eps) t_gate = std::min(t_gate, g);

        const double t_next = std::min(t_comp, t_gate);
        if (t_next == kInf)
            throw StructuralError("engine: deadlock, unfinished jobs with no event");

        const double delta = t_next - now;
        if (delta > 0.0 && !run.empty()) {
            for (size_t i = 0; i < run.size(); ++i) {
                trace.intervals.push_back(
                    {now, t_next, run[i], eng.core_job[run[i]], alpha[i]});
                eng.core_work[run[i]] -= alpha[i] * delta;
            }
        }
        now = t_next;

        for (int c : run)
            if (eng.core_job[c] != -1 && eng.core_work[c] <= params.eps)
                eng.complete(c, now, trace);
        eng.refresh_ready(now);
    }

    for (const auto& j : trace.jobs)
        trace.makespan_ms = std::max(trace.makespan_ms, j.finish_ms);
    return trace;
}

} // namespace

std::vector<double> bandwidth_shares(const std::vector<double>& demands,
                                     double budget, double eps) {
    std::vector<double> shares(demands.size(), 0.0);
    if (demands.empty()) return shares;
    double sum = 0.0;
    for (double d : demands) sum += d;
    if (sum > eps) {
        for (size_t i = 0; i < demands.size(); ++i)
            shares[i] = demands[i] / sum * budget;
    } else {
        const double equal = budget / static_cast<double>(demands.size());
        for (auto& s : shares) s = equal;
    }
    return shares;
}

ScheduleTrace run_waitall(const Dag& dag, const ProfileTable& profile,
                          const RankMap& ranks, double t_start_ms,
                          const std::vector<double>& gates_ms,
                          const EngineParams& params) {
    for (double g : gates_ms)
        if (g > t_start_ms + params.eps)
            throw ConfigError("run_waitall: t_start is before a slice gate");
    return run_event_driven(dag, profile, ranks, t_start_ms, gates_ms, params,
                            /*gate_events=*/false);
}

ScheduleTrace run_gated(const Dag& dag, const ProfileTable& profile,
                        const RankMap& ranks, const std::vector<double>& gates_ms,
                        const EngineParams& params) {
    for (double g : gates_ms)
        if (!std::isfinite(g))
            throw ConfigError("run_gated: gates must be finite");
    return run_event_driven(dag, profile, ranks, 0.0, gates_ms, params,
                            /*gate_events=*/true);
}

ScheduleTrace run_reference_fixed_step(const Dag& dag, const ProfileTable& profile,
                                       const RankMap& ranks, double t_start_ms,
                                       const std::vector<double>& gates_ms,
                                       const EngineParams& params, bool gated,
                                       double step_ms) {
    EngineCore eng(dag, profile, ranks, gates_ms, params);
    ScheduleTrace trace;
    trace.jobs.assign(dag.size(), {});

    double now = t_start_ms;
    eng.refresh_ready(now);

    const long step_cap = 200'000'000;
    long steps = 0;
    while (eng.finished < dag.size()) {
        if (++steps > step_cap)
            throw StructuralError("reference engine: step cap exceeded");

        eng.dispatch(now, trace);
        const std::vector<int> run = eng.running_cores();
        if (run.empty()) {
            double next_gate = kInf;
            if (gated)
                for (double g : gates_ms)
                    if (g > now + params.eps) next_gate = std::min(next_gate, g);
            if (next_gate == kInf)
                throw StructuralError(
                    "reference engine: deadlock, unfinished jobs with no event");
            const double n = std::ceil((next_gate - now) / step_ms - 1e-12);
            now += std::max(1.0, n) * step_ms;
        } else {
            const std::vector<double> alpha = eng.shares(run);
            for (size_t i = 0; i < run.size(); ++i)
                eng.core_work[run[i]] -= alpha[i] * step_ms;
            now += step_ms;
            for (int c : run)
                if (eng.core_job[c] != -1 && eng.core_work[c] <= params.eps)
                    eng.complete(c, now, trace);
        }
        eng.refresh_ready(now);
    }

    for (const auto& j : trace.jobs)
        trace.makespan_ms = std::max(trace.makespan_ms, j.finish_ms);
    return trace;
}

void write_schedule_jsonl(const ScheduleTrace& trace, const Dag& dag, std::ostream& out) {
    for (int v = 0; v < dag.size(); ++v) {
        nlohmann::json rec = {
            {"job", v},
            {"kind", to_string(dag.jobs[v].kind)},
            {"slice", dag.jobs[v].slice},
            {"core", trace.jobs[v].core},
            {"start_ms", trace.jobs[v].start_ms},
            {"finish_ms", trace.jobs[v].finish_ms},
        };
        out << rec.dump() << '\n';
    }
    for (const auto& iv : trace.intervals) {
        nlohmann::json rec = {
            {"t_a", iv.t_a}, {"t_b", iv.t_b}, {"core", iv.core}, {"share", iv.share}};
        out << rec.dump() << '\n';
    }
}

void write_bandwidth_csv(const ScheduleTrace& trace, std::ostream& out) {
    out << "t_a,t_b,core,share\n";
    for (const auto& iv : trace.intervals)
        out << iv.t_a << ',' << iv.t_b << ',' << iv.core << ',' << iv.share << '\n';
}

} // namespace winp
