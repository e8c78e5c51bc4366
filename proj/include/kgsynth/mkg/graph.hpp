#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgsynth/common/icd.hpp"
#include "kgsynth/common/io.hpp"

namespace kgsynth::mkg {

enum class NodeKind { Disease, Drug, Symptom };
enum class Relation { DiseaseDrug, DiseaseSymptom };
enum class Direction { Forward, Reverse };

std::string_view to_string(NodeKind kind) noexcept;
std::string_view to_string(Relation relation) noexcept;
NodeKind node_kind_from_string(std::string_view s);
Relation relation_from_string(std::string_view s);

/// Kinds at the two ends of a relation, in stored direction.
NodeKind source_kind(Relation relation) noexcept;
NodeKind target_kind(Relation relation) noexcept;

struct GraphNode {
    std::string id;
    NodeKind kind = NodeKind::Disease;
    std::string label;
    std::optional<IcdCategory> icd;  // diseases only
    std::optional<std::string> source_text;

    bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
    std::string from;
    std::string to;
    Relation relation = Relation::DiseaseDrug;

    auto operator<=>(const GraphEdge&) const = default;
};

struct GraphStats {
    std::size_t n_disease = 0;
    std::size_t n_drug = 0;
    std::size_t n_symptom = 0;
    std::size_t n_di_dr = 0;
    std::size_t n_di_s = 0;

    bool operator==(const GraphStats&) const = default;
};

/// Disease/drug/symptom graph. Immutable once built; every mutation goes
/// through `build` again and yields a new value.
///
/// Several disease nodes may share one ICD category; code-level queries
/// take the union over them.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    /// Validates all node and edge invariants and throws IntegrityError naming
    /// the first offending record. Nodes and edges are stored sorted, so two
    /// graphs with the same content serialize identically.
    static KnowledgeGraph build(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges);

    const std::vector<GraphNode>& nodes() const noexcept { return nodes_; }
    const std::vector<GraphEdge>& edges() const noexcept { return edges_; }

    const GraphNode* find(std::string_view id) const;
    /// Throws UnknownNodeError.
    const GraphNode& node(std::string_view id) const;

    bool has_code(const IcdCategory& code) const { return diseases_by_code_.contains(code); }
    std::vector<IcdCategory> codes() const;
    /// Disease ids carrying `code`, sorted. Throws UnknownCodeError.
    const std::vector<std::string>& diseases_with_code(const IcdCategory& code) const;
    /// Symptom node ids linked to any disease with `code`, sorted and unique.
    /// Throws UnknownCodeError.
    const std::vector<std::string>& symptom_ids(const IcdCategory& code) const;

    /// Neighbor ids of `id` along `relation` walked in `direction`, sorted.
    const std::vector<std::string>& neighbors(std::string_view id, Relation relation, Direction direction) const;

private:
    std::vector<GraphNode> nodes_;
    std::vector<GraphEdge> edges_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<std::string, std::array<std::vector<std::string>, 4>> adjacency_;
    std::map<IcdCategory, std::vector<std::string>> diseases_by_code_;
    std::map<IcdCategory, std::vector<std::string>> symptoms_by_code_;
};

KnowledgeGraph graph_from_json(const json& document);
json graph_to_json(const KnowledgeGraph& graph);

/// Throws ParseError or IntegrityError.
KnowledgeGraph load_graph(const fs::path& path);
void save_graph(const KnowledgeGraph& graph, const fs::path& path);

GraphStats stats(const KnowledgeGraph& graph);
json stats_to_json(const GraphStats& s);

/// Symptom nodes of a disease category, sorted by id.
std::vector<GraphNode> symptoms_of(const KnowledgeGraph& graph, const IcdCategory& code);

}  // namespace kgsynth::mkg
