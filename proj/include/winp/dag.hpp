#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace winp {

enum class OperatorKind : std::uint8_t {
    Embed,
    Enc1,
    Enc2,
    Enc3,
    Proj,
    Align,
    Fusion,
    Classifier,
    Output,
};

const char* to_string(OperatorKind kind);

// True for operators that live inside one modality subgraph.
inline bool is_slice_kind(OperatorKind k) {
    return k == OperatorKind::Embed || k == OperatorKind::Enc1 ||
           k == OperatorKind::Enc2 || k == OperatorKind::Enc3 ||
           k == OperatorKind::Proj;
}

struct Job {
    int id = -1;
    OperatorKind kind = OperatorKind::Embed;
    int slice = -1; // modality index, -1 for cross-modality jobs
};

struct Dag {
    std::vector<Job> jobs;
    std::vector<std::pair<int, int>> edges; // (pred, succ)
    int output_id = -1;
    int modality_count = 0;

    std::vector<std::vector<int>> preds;
    std::vector<std::vector<int>> succs;

    int size() const { return static_cast<int>(jobs.size()); }

    void add_job(OperatorKind kind, int slice = -1);
    void add_edge(int pred, int succ);

    // Topological order of job ids; throws StructuralError on a cycle.
    std::vector<int> topo_order() const;
};

// Two-level multimodal graph: per modality a 5-node encoder chain, then two
// alignment nodes over disjoint halves of the modalities feeding
// Fusion -> Classifier -> Output. Node ids are modality-major, then
// Align_1, Align_2, Fusion, Classifier, Output.
Dag build_multimodal_dag(int modality_count);

// One "pred succ" pair per line.
void write_edge_list(const Dag& dag, std::ostream& out);

} // namespace winp
