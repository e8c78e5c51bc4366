#include "kgsynth/mkg/traverse.hpp"

#include <algorithm>

#include "kgsynth/common/error.hpp"

namespace kgsynth::mkg {
namespace {

NodeKind from_kind(const HopStep& step) {
    return step.direction == Direction::Forward ? source_kind(step.relation) : target_kind(step.relation);
}

void extend(const KnowledgeGraph& graph, const PathSpec& spec, NodePath& path, std::vector<NodePath>& out) {
    const std::size_t depth = path.size() - 1;
    if (depth == spec.size()) {
        out.push_back(path);
        return;
    }
    const auto& step = spec[depth];
    if (graph.node(path.back()).kind != from_kind(step)) return;
    for (const auto& next : graph.neighbors(path.back(), step.relation, step.direction)) {
        if (std::find(path.begin(), path.end(), next) != path.end()) continue;
        path.push_back(next);
        extend(graph, spec, path, out);
        path.pop_back();
    }
}

}  // namespace

PathSpec hop_pattern(int hops) {
    using enum Relation;
    using enum Direction;
    switch (hops) {
        case 1: return {{DiseaseSymptom, Forward}};
        case 2: return {{DiseaseSymptom, Reverse}, {DiseaseDrug, Forward}};
        case 3: return {{DiseaseSymptom, Forward}, {DiseaseSymptom, Reverse}, {DiseaseDrug, Forward}};
        default: throw DomainError("hop count must be in 1..3, got " + std::to_string(hops));
    }
}

std::vector<NodePath> khop_traverse(const KnowledgeGraph& graph, const std::string& start, const PathSpec& spec) {
    if (spec.empty() || spec.size() > kMaxHops)
        throw DomainError("path spec must have 1..3 steps, got " + std::to_string(spec.size()));
    graph.node(start);
    std::vector<NodePath> out;
    NodePath path{start};
    extend(graph, spec, path, out);
    return out;
}

}  // namespace kgsynth::mkg
