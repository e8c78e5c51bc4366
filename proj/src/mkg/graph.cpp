#include "kgsynth/mkg/graph.hpp"

#include <algorithm>
#include <set>

#include "kgsynth/common/error.hpp"

namespace kgsynth::mkg {
namespace {

std::size_t slot(Relation relation, Direction direction) {
    return static_cast<std::size_t>(relation) * 2 + static_cast<std::size_t>(direction);
}

const std::vector<std::string>& empty_ids() {
    static const std::vector<std::string> none;
    return none;
}

std::string describe(const GraphEdge& e) {
    return "edge " + e.from + " -[" + std::string(to_string(e.relation)) + "]-> " + e.to;
}

}  // namespace

std::string_view to_string(NodeKind kind) noexcept {
    switch (kind) {
        case NodeKind::Disease: return "disease";
        case NodeKind::Drug: return "drug";
        case NodeKind::Symptom: return "symptom";
    }
    return "?";
}

std::string_view to_string(Relation relation) noexcept {
    return relation == Relation::DiseaseDrug ? "di_dr" : "di_s";
}

NodeKind node_kind_from_string(std::string_view s) {
    if (s == "disease") return NodeKind::Disease;
    if (s == "drug") return NodeKind::Drug;
    if (s == "symptom") return NodeKind::Symptom;
    throw ParseError("unknown node kind '" + std::string(s) + "'");
}

Relation relation_from_string(std::string_view s) {
    if (s == "di_dr") return Relation::DiseaseDrug;
    if (s == "di_s") return Relation::DiseaseSymptom;
    throw ParseError("unknown relation '" + std::string(s) + "'");
}

NodeKind source_kind(Relation) noexcept { return NodeKind::Disease; }

NodeKind target_kind(Relation relation) noexcept {
    return relation == Relation::DiseaseDrug ? NodeKind::Drug : NodeKind::Symptom;
}

KnowledgeGraph KnowledgeGraph::build(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges) {
    KnowledgeGraph g;
    std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(edges.begin(), edges.end());

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        if (n.id.empty()) throw IntegrityError("node with empty id");
        if (n.label.empty()) throw IntegrityError("node " + n.id + " has an empty label");
        if (n.kind == NodeKind::Disease && !n.icd)
            throw IntegrityError("disease node " + n.id + " has no ICD category");
        if (n.kind != NodeKind::Disease && n.icd)
            throw IntegrityError(std::string(to_string(n.kind)) + " node " + n.id + " carries an ICD category");
        if (!g.index_.emplace(n.id, i).second) throw IntegrityError("duplicate node id " + n.id);
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (i > 0 && edges[i - 1] == e) throw IntegrityError("duplicate " + describe(e));
        const auto from = g.index_.find(e.from);
        if (from == g.index_.end()) throw IntegrityError(describe(e) + " references missing node id " + e.from);
        const auto to = g.index_.find(e.to);
        if (to == g.index_.end()) throw IntegrityError(describe(e) + " references missing node id " + e.to);
        if (nodes[from->second].kind != source_kind(e.relation) || nodes[to->second].kind != target_kind(e.relation))
            throw IntegrityError(describe(e) + " connects " + std::string(to_string(nodes[from->second].kind)) +
                                 " to " + std::string(to_string(nodes[to->second].kind)));
    }

    for (const auto& e : edges) {
        g.adjacency_[e.from][slot(e.relation, Direction::Forward)].push_back(e.to);
        g.adjacency_[e.to][slot(e.relation, Direction::Reverse)].push_back(e.from);
    }
    for (auto& [id, lists] : g.adjacency_)
        for (auto& list : lists) std::sort(list.begin(), list.end());

    for (const auto& n : nodes)
        if (n.kind == NodeKind::Disease) g.diseases_by_code_[*n.icd].push_back(n.id);
    for (const auto& [code, diseases] : g.diseases_by_code_) {
        std::set<std::string> symptoms;
        for (const auto& d : diseases)
            for (const auto& s : g.neighbors(d, Relation::DiseaseSymptom, Direction::Forward)) symptoms.insert(s);
        g.symptoms_by_code_[code] = {symptoms.begin(), symptoms.end()};
    }

    g.nodes_ = std::move(nodes);
    g.edges_ = std::move(edges);
    return g;
}

const GraphNode* KnowledgeGraph::find(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &nodes_[it->second];
}

const GraphNode& KnowledgeGraph::node(std::string_view id) const {
    if (const auto* n = find(id)) return *n;
    throw UnknownNodeError("unknown node id " + std::string(id));
}

std::vector<IcdCategory> KnowledgeGraph::codes() const {
    std::vector<IcdCategory> out;
    for (const auto& [code, _] : diseases_by_code_) out.push_back(code);
    return out;
}

const std::vector<std::string>& KnowledgeGraph::diseases_with_code(const IcdCategory& code) const {
    const auto it = diseases_by_code_.find(code);
    if (it == diseases_by_code_.end()) throw UnknownCodeError("no disease with ICD category " + code.code());
    return it->second;
}

const std::vector<std::string>& KnowledgeGraph::symptom_ids(const IcdCategory& code) const {
    const auto it = symptoms_by_code_.find(code);
    if (it == symptoms_by_code_.end()) throw UnknownCodeError("no disease with ICD category " + code.code());
    return it->second;
}

const std::vector<std::string>& KnowledgeGraph::neighbors(std::string_view id, Relation relation,
                                                          Direction direction) const {
    const auto it = adjacency_.find(std::string(id));
    if (it == adjacency_.end()) return empty_ids();
    return it->second[slot(relation, direction)];
}

KnowledgeGraph graph_from_json(const json& document) {
    if (!document.is_object() || !document.contains("nodes") || !document.contains("edges") ||
        !document["nodes"].is_array() || !document["edges"].is_array())
        throw ParseError("graph document needs \"nodes\" and \"edges\" arrays");

    std::vector<GraphNode> nodes;
    std::size_t i = 0;
    for (const auto& j : document["nodes"]) {
        const auto where = "nodes[" + std::to_string(i++) + "]";
        try {
            GraphNode n;
            n.id = j.at("id").get<std::string>();
            n.kind = node_kind_from_string(j.at("kind").get<std::string>());
            n.label = j.at("label").get<std::string>();
            if (j.contains("icd") && !j["icd"].is_null()) {
                const auto code = j["icd"].get<std::string>();
                n.icd = IcdCategory::try_parse(code);
                if (!n.icd) throw IntegrityError(where + " (" + n.id + "): '" + code + "' is not a category code");
            }
            if (j.contains("source_text") && !j["source_text"].is_null())
                n.source_text = j["source_text"].get<std::string>();
            nodes.push_back(std::move(n));
        } catch (const json::exception& e) {
            throw ParseError(where + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    std::vector<GraphEdge> edges;
    i = 0;
    for (const auto& j : document["edges"]) {
        const auto where = "edges[" + std::to_string(i++) + "]";
        try {
            edges.push_back({j.at("from").get<std::string>(), j.at("to").get<std::string>(),
                             relation_from_string(j.at("rel").get<std::string>())});
        } catch (const json::exception& e) {
            throw ParseError(where + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    return KnowledgeGraph::build(std::move(nodes), std::move(edges));
}

json graph_to_json(const KnowledgeGraph& graph) {
    json nodes = json::array();
    for (const auto& n : graph.nodes()) {
        json j{{"id", n.id}, {"kind", to_string(n.kind)}, {"label", n.label}};
        if (n.icd) j["icd"] = n.icd->code();
        if (n.source_text) j["source_text"] = *n.source_text;
        nodes.push_back(std::move(j));
    }
    json edges = json::array();
    for (const auto& e : graph.edges()) edges.push_back({{"from", e.from}, {"to", e.to}, {"rel", to_string(e.relation)}});
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

KnowledgeGraph load_graph(const fs::path& path) { return graph_from_json(read_json(path)); }

void save_graph(const KnowledgeGraph& graph, const fs::path& path) {
    write_json_atomic(path, graph_to_json(graph));
}

GraphStats stats(const KnowledgeGraph& graph) {
    GraphStats s;
    for (const auto& n : graph.nodes()) {
        switch (n.kind) {
            case NodeKind::Disease: ++s.n_disease; break;
            case NodeKind::Drug: ++s.n_drug; break;
            case NodeKind::Symptom: ++s.n_symptom; break;
        }
    }
    for (const auto& e : graph.edges()) (e.relation == Relation::DiseaseDrug ? s.n_di_dr : s.n_di_s)++;
    return s;
}

json stats_to_json(const GraphStats& s) {
    return {{"disease", s.n_disease}, {"drug", s.n_drug}, {"symptom", s.n_symptom},
            {"di_dr", s.n_di_dr}, {"di_s", s.n_di_s}};
}

std::vector<GraphNode> symptoms_of(const KnowledgeGraph& graph, const IcdCategory& code) {
    std::vector<GraphNode> out;
    for (const auto& id : graph.symptom_ids(code)) out.push_back(graph.node(id));
    return out;
}

}  // namespace kgsynth::mkg
