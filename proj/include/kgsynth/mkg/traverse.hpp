#pragma once

#include <string>
#include <vector>

#include "kgsynth/mkg/graph.hpp"

namespace kgsynth::mkg {

struct HopStep {
    Relation relation;
    Direction direction;
};

using PathSpec = std::vector<HopStep>;
using NodePath = std::vector<std::string>;

inline constexpr std::size_t kMaxHops = 3;

/// Canonical reasoning patterns by hop count:
///   1: Di-S        2: S-Di-Dr        3: Di-S-Di-Dr
/// Throws DomainError outside 1..3.
PathSpec hop_pattern(int hops);

/// Every simple path from `start` that follows `spec` step by step. Nodes
/// never repeat within a path, so a Di-S-Di-Dr path always reaches a second
/// disease distinct from the first. Paths come out in lexicographic order of
/// node ids.
///
/// Throws UnknownNodeError for a missing start node and DomainError when the
/// spec is empty or longer than three hops.
std::vector<NodePath> khop_traverse(const KnowledgeGraph& graph, const std::string& start, const PathSpec& spec);

}  // namespace kgsynth::mkg
