#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "winp/errors.hpp"
#include "winp/workload.hpp"

using namespace winp;

namespace {

WorkloadGenConfig table2_config() {
    WorkloadGenConfig cfg;
    cfg.token_sizes = {512, 128, 256, 128, 192, 128};
    cfg.compression = {0.25, 0.25, 0.80, 0.60, 0.60, 0.60};
    return cfg;
}

WorkloadGenConfig collapsed_config() {
    WorkloadGenConfig cfg = table2_config();
    cfg.jitter_range = {1.0, 1.0};
    cfg.speed_jitter_range = {0.0, 0.0};
    cfg.bw_jitter_range = {0.0, 0.0};
    return cfg;
}

std::set<int> align_pred_slices(const Dag& dag, int align_id) {
    std::set<int> slices;
    for (int p : dag.preds[align_id]) slices.insert(dag.jobs[p].slice);
    return slices;
}

} // namespace

TEST_CASE("multimodal dag shape for K=6") {
    const Dag dag = build_multimodal_dag(6);
    CHECK(dag.size() == 35);
    CHECK(dag.edges.size() == 34);
    const int align1 = 30, align2 = 31;
    CHECK(dag.jobs[align1].kind == OperatorKind::Align);
    CHECK(align_pred_slices(dag, align1) == std::set<int>{0, 1, 2});
    CHECK(align_pred_slices(dag, align2) == std::set<int>{3, 4, 5});
    CHECK(dag.jobs[dag.output_id].kind == OperatorKind::Output);
    CHECK(dag.succs[dag.output_id].empty());
}

TEST_CASE("multimodal dag shape for K=2 and K=3") {
    const Dag two = build_multimodal_dag(2);
    CHECK(two.size() == 15);
    CHECK(two.edges.size() == 14);
    CHECK(align_pred_slices(two, 10) == std::set<int>{0});
    CHECK(align_pred_slices(two, 11) == std::set<int>{1});

    const Dag three = build_multimodal_dag(3);
    CHECK(three.size() == 20);
    CHECK(align_pred_slices(three, 15) == std::set<int>{0});
    CHECK(align_pred_slices(three, 16) == std::set<int>{1, 2});
}

TEST_CASE("node and edge counts follow 5K+5 and 5K+4") {
    for (int k = 2; k <= 12; ++k) {
        const Dag dag = build_multimodal_dag(k);
        CHECK(dag.size() == 5 * k + 5);
        CHECK(static_cast<int>(dag.edges.size()) == 5 * k + 4);
        CHECK_NOTHROW(dag.topo_order());
    }
}

TEST_CASE("K=1 is rejected") {
    CHECK_THROWS_AS(build_multimodal_dag(1), ConfigError);
}

TEST_CASE("payloads reproduce the slice sizes") {
    const auto payloads = compute_payloads(table2_config());
    // 512 tokens at 0.25 compression: 512 * 512 * 2 * 0.25 * 1.05 bytes
    CHECK(payloads[0].bytes == doctest::Approx(137625.6));
    CHECK(payloads[0].bytes / 1024.0 == doctest::Approx(134.4));
    CHECK(payloads[2].bytes == doctest::Approx(220200.96));
    CHECK(payloads[2].bytes / 1024.0 == doctest::Approx(215.04));
    CHECK(payloads[3].bytes / 1024.0 == doctest::Approx(80.64));
    CHECK(payloads[0].bits == doctest::Approx(8 * 137625.6));
}

TEST_CASE("collapsed jitter gives the closed-form embed latency") {
    const WorkloadGenConfig cfg = collapsed_config();
    const Dag dag = build_multimodal_dag(cfg.modality_count());
    const ProfileTable profile = generate_profile(dag, cfg);
    // Embed of slice 0: S=512, g = 0.0020*512, scale 6, slot 1 ms
    for (int c = 0; c < cfg.core_count; ++c)
        CHECK(profile.latency[0][c] == doctest::Approx(6.144));
}

TEST_CASE("cross-modality token scale is the full sum") {
    const WorkloadGenConfig cfg = table2_config();
    const Dag dag = build_multimodal_dag(cfg.modality_count());
    int fusion = -1;
    for (int v = 0; v < dag.size(); ++v)
        if (dag.jobs[v].kind == OperatorKind::Fusion) fusion = v;
    CHECK(token_scale(dag, cfg, fusion) == doctest::Approx(1344.0));
}

TEST_CASE("jitter arithmetic at the extremes") {
    // fixed g*scale = 10 ms, xi = 1.1, core speed 0.92
    CHECK(10.0 * 1.1 / 0.92 == doctest::Approx(11.9565).epsilon(1e-4));
}

TEST_CASE("profile invariants: work product, positivity, determinism") {
    const WorkloadGenConfig cfg = table2_config();
    const Dag dag = build_multimodal_dag(cfg.modality_count());
    const ProfileTable a = generate_profile(dag, cfg);
    const ProfileTable b = generate_profile(dag, cfg);
    for (int v = 0; v < dag.size(); ++v) {
        for (int c = 0; c < cfg.core_count; ++c) {
            CHECK(a.latency[v][c] > 0.0);
            CHECK(a.bandwidth[v][c] > 0.0);
            CHECK(a.bandwidth[v][c] <= 1.0);
            CHECK(a.work[v][c] == a.latency[v][c] * a.bandwidth[v][c]);
            CHECK(a.latency[v][c] == b.latency[v][c]);
            // cores differ only through latency jitter and speed
            CHECK(a.bandwidth[v][c] == a.bandwidth[v][0]);
        }
        double mean = 0.0;
        for (int c = 0; c < cfg.core_count; ++c) mean += a.latency[v][c];
        CHECK(a.mean_latency[v] == doctest::Approx(mean / cfg.core_count).epsilon(1e-12));
    }

    WorkloadGenConfig other = cfg;
    other.seed = cfg.seed + 1;
    const ProfileTable c = generate_profile(dag, other);
    bool any_diff = false;
    for (int v = 0; v < dag.size(); ++v)
        if (c.latency[v][0] != a.latency[v][0]) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("upward rank of a chain and a diamond") {
    Dag chain;
    chain.add_job(OperatorKind::Enc1);
    chain.add_job(OperatorKind::Enc1);
    chain.add_job(OperatorKind::Enc1);
    chain.add_edge(0, 1);
    chain.add_edge(1, 2);
    chain.output_id = 2;
    ProfileTable profile;
    profile.mean_latency = {3, 5, 7};
    const RankMap r = upward_ranks(chain, profile);
    CHECK(r[2] == doctest::Approx(7));
    CHECK(r[1] == doctest::Approx(12));
    CHECK(r[0] == doctest::Approx(15));

    Dag diamond;
    for (int i = 0; i < 4; ++i) diamond.add_job(OperatorKind::Enc1);
    diamond.add_edge(0, 1);
    diamond.add_edge(0, 2);
    diamond.add_edge(1, 3);
    diamond.add_edge(2, 3);
    diamond.output_id = 3;
    ProfileTable dp;
    dp.mean_latency = {1, 10, 2, 4};
    const RankMap d = upward_ranks(diamond, dp);
    CHECK(d[3] == doctest::Approx(4));
    CHECK(d[1] == doctest::Approx(14));
    CHECK(d[2] == doctest::Approx(6));
    CHECK(d[0] == doctest::Approx(15));
}

TEST_CASE("rank strictly decreases along every edge") {
    const WorkloadGenConfig cfg = table2_config();
    const Dag dag = build_multimodal_dag(cfg.modality_count());
    const ProfileTable profile = generate_profile(dag, cfg);
    const RankMap ranks = upward_ranks(dag, profile);
    for (const auto& [u, v] : dag.edges) CHECK(ranks[u] > ranks[v]);
}

TEST_CASE("cycle detection") {
    Dag bad;
    bad.add_job(OperatorKind::Enc1);
    bad.add_job(OperatorKind::Enc1);
    bad.add_edge(0, 1);
    bad.add_edge(1, 0);
    ProfileTable profile;
    profile.mean_latency = {1, 1};
    CHECK_THROWS_AS(upward_ranks(bad, profile), StructuralError);
}

TEST_CASE("config validation") {
    WorkloadGenConfig cfg = table2_config();
    cfg.compression = {0.5, 0.5};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = table2_config();
    cfg.compression[0] = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = table2_config();
    cfg.overhead = 0.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
