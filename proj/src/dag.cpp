#include "winp/dag.hpp"

#include <ostream>
#include <queue>

#include "winp/errors.hpp"

namespace winp {

const char* to_string(OperatorKind kind) {
    switch (kind) {
    case OperatorKind::Embed: return "Embed";
    case OperatorKind::Enc1: return "Enc1";
    case OperatorKind::Enc2: return "Enc2";
    case OperatorKind::Enc3: return "Enc3";
    case OperatorKind::Proj: return "Proj";
    case OperatorKind::Align: return "Align";
    case OperatorKind::Fusion: return "Fusion";
    case OperatorKind::Classifier: return "Classifier";
    case OperatorKind::Output: return "Output";
    }
    return "?";
}

void Dag::add_job(OperatorKind kind, int slice) {
    Job j;
    j.id = static_cast<int>(jobs.size());
    j.kind = kind;
    j.slice = slice;
    jobs.push_back(j);
    preds.emplace_back();
    succs.emplace_back();
}

void Dag::add_edge(int pred, int succ) {
    edges.emplace_back(pred, succ);
    succs[pred].push_back(succ);
    preds[succ].push_back(pred);
}

std::vector<int> Dag::topo_order() const {
    std::vector<int> indeg(jobs.size(), 0);
    for (const auto& [u, v] : edges) indeg[v]++;
    std::queue<int> q;
    for (int v = 0; v < size(); ++v)
        if (indeg[v] == 0) q.push(v);
    std::vector<int> order;
    order.reserve(jobs.size());
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        order.push_back(v);
        for (int s : succs[v])
            if (--indeg[s] == 0) q.push(s);
    }
    if (order.size() != jobs.size())
        throw StructuralError("dag: cycle detected");
    return order;
}

Dag build_multimodal_dag(int modality_count) {
    if (modality_count < 2)
        throw ConfigError("build_multimodal_dag: K must be >= 2, got " +
                          std::to_string(modality_count));

    Dag dag;
    dag.modality_count = modality_count;

    const OperatorKind chain[] = {OperatorKind::Embed, OperatorKind::Enc1,
                                  OperatorKind::Enc2, OperatorKind::Enc3,
                                  OperatorKind::Proj};
    for (int k = 0; k < modality_count; ++k) {
        for (OperatorKind kind : chain) dag.add_job(kind, k);
        for (int i = 0; i < 4; ++i) dag.add_edge(5 * k + i, 5 * k + i + 1);
    }

    const int align1 = dag.size();
    dag.add_job(OperatorKind::Align);
    const int align2 = dag.size();
    dag.add_job(OperatorKind::Align);
    const int fusion = dag.size();
    dag.add_job(OperatorKind::Fusion);
    const int classifier = dag.size();
    dag.add_job(OperatorKind::Classifier);
    const int output = dag.size();
    dag.add_job(OperatorKind::Output);
    dag.output_id = output;

    const int half = modality_count / 2;
    for (int k = 0; k < modality_count; ++k) {
        const int proj = 5 * k + 4;
        dag.add_edge(proj, k < half ? align1 : align2);
    }
    dag.add_edge(align1, fusion);
    dag.add_edge(align2, fusion);
    dag.add_edge(fusion, classifier);
    dag.add_edge(classifier, output);
    return dag;
}

void write_edge_list(const Dag& dag, std::ostream& out) {
    for (const auto& [u, v] : dag.edges) out << u << ' ' << v << '\n';
}

} // namespace winp
