#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/rng.hpp"
#include "kgsynth/gateway/mock_backend.hpp"
#include "kgsynth/mkg/extract.hpp"
#include "kgsynth/mkg/graph.hpp"
#include "kgsynth/mkg/traverse.hpp"
#include "test_support.hpp"

using namespace kgsynth;
using namespace kgsynth::mkg;

namespace {

KnowledgeGraph small_graph() { return load_graph(kgtest::fixture("graph_small.json")); }

/// Random valid graph: diseases carry codes from a small pool so some share a category.
json random_graph_json(Rng& rng, std::size_t max_nodes) {
    const auto nd = 1 + rng.uniform_index(max_nodes / 3);
    const auto nr = rng.uniform_index(max_nodes / 3);
    const auto ns = rng.uniform_index(max_nodes / 3);
    json nodes = json::array(), edges = json::array();
    for (std::size_t i = 0; i < nd; ++i)
        nodes.push_back({{"id", "D" + std::to_string(i)}, {"kind", "disease"}, {"label", "disease " + std::to_string(i)},
                         {"icd", std::string("K") + std::to_string(10 + rng.uniform_index(5))}});
    for (std::size_t i = 0; i < nr; ++i)
        nodes.push_back({{"id", "R" + std::to_string(i)}, {"kind", "drug"}, {"label", "drug " + std::to_string(i)}});
    for (std::size_t i = 0; i < ns; ++i)
        nodes.push_back({{"id", "S" + std::to_string(i)}, {"kind", "symptom"}, {"label", "symptom " + std::to_string(i)}});
    for (std::size_t d = 0; d < nd; ++d) {
        for (std::size_t s = 0; s < ns; ++s)
            if (rng.uniform01() < 0.3) edges.push_back({{"from", "D" + std::to_string(d)}, {"to", "S" + std::to_string(s)}, {"rel", "di_s"}});
        for (std::size_t r = 0; r < nr; ++r)
            if (rng.uniform01() < 0.3) edges.push_back({{"from", "D" + std::to_string(d)}, {"to", "R" + std::to_string(r)}, {"rel", "di_dr"}});
    }
    return {{"nodes", nodes}, {"edges", edges}};
}

/// Exhaustive enumeration over edge tuples, independent of the adjacency index.
std::set<NodePath> oracle_paths(const json& g, const std::string& start, const PathSpec& spec) {
    struct E { std::string a, b, rel; };
    std::vector<E> edges;
    for (const auto& e : g["edges"]) edges.push_back({e["from"], e["to"], e["rel"]});
    std::set<NodePath> out;
    std::vector<NodePath> frontier{{start}};
    for (const auto& step : spec) {
        const std::string rel = step.relation == Relation::DiseaseDrug ? "di_dr" : "di_s";
        std::vector<NodePath> next;
        for (const auto& p : frontier)
            for (const auto& e : edges) {
                if (e.rel != rel) continue;
                const auto& from = step.direction == Direction::Forward ? e.a : e.b;
                const auto& to = step.direction == Direction::Forward ? e.b : e.a;
                if (from != p.back() || std::find(p.begin(), p.end(), to) != p.end()) continue;
                auto q = p;
                q.push_back(to);
                next.push_back(std::move(q));
            }
        frontier = std::move(next);
    }
    out.insert(frontier.begin(), frontier.end());
    return out;
}

}  // namespace

TEST(Graph, FixtureCounts) {
    EXPECT_EQ(stats(small_graph()), (GraphStats{3, 2, 4, 2, 4}));
}

TEST(Graph, EmptyGraphStatsAreZero) {
    EXPECT_EQ(stats(KnowledgeGraph::build({}, {})), GraphStats{});
}

TEST(Graph, DanglingEdgeNamesTheId) {
    auto doc = read_json(kgtest::fixture("graph_small.json"));
    doc["edges"].push_back({{"from", "D1"}, {"to", "S999"}, {"rel", "di_s"}});
    try {
        graph_from_json(doc);
        FAIL();
    } catch (const IntegrityError& e) {
        EXPECT_NE(std::string(e.what()).find("S999"), std::string::npos);
    }
}

TEST(Graph, RandomMutationsAreRejected) {
    Rng rng(11);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto doc = random_graph_json(rng, 30);
        auto& nodes = doc["nodes"];
        auto& edges = doc["edges"];
        switch (rng.uniform_index(7)) {
            case 0: edges.push_back({{"from", "D0"}, {"to", "missing"}, {"rel", "di_s"}}); break;
            case 1: nodes.push_back(nodes[rng.uniform_index(nodes.size())]); break;
            case 2: {
                // Disease-to-disease is never a legal pair.
                edges.push_back({{"from", "D0"}, {"to", "D0"}, {"rel", rng.uniform_index(2) ? "di_s" : "di_dr"}});
                break;
            }
            case 3:
                if (edges.empty()) continue;
                edges.push_back(edges[rng.uniform_index(edges.size())]);
                break;
            case 4: nodes[0].erase("icd"); break;
            case 5: nodes.push_back({{"id", "X"}, {"kind", "symptom"}, {"label", "x"}, {"icd", "K10"}}); break;
            case 6: nodes[rng.uniform_index(nodes.size())]["label"] = ""; break;
        }
        EXPECT_THROW(graph_from_json(doc), Error) << doc.dump();
        ++checked;
    }
    EXPECT_GT(checked, 200);
}

TEST(Graph, KindClosureHoldsOnRandomGraphs) {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = graph_from_json(random_graph_json(rng, 45));
        for (const auto& e : g.edges()) {
            EXPECT_EQ(g.node(e.from).kind, NodeKind::Disease);
            EXPECT_EQ(g.node(e.to).kind, e.relation == Relation::DiseaseDrug ? NodeKind::Drug : NodeKind::Symptom);
        }
    }
}

TEST(Graph, SaveLoadPreservesStats) {
    kgtest::TempDir dir;
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = graph_from_json(random_graph_json(rng, 45));
        save_graph(g, dir / "g.json");
        const auto back = load_graph(dir / "g.json");
        EXPECT_EQ(stats(back), stats(g));
        EXPECT_EQ(graph_to_json(back), graph_to_json(g));
    }
}

TEST(Graph, SymptomsOfFixtureDisease) {
    const auto g = small_graph();
    const auto s = symptoms_of(g, IcdCategory::parse("K81"));
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].id, "S1");
    EXPECT_EQ(s[1].id, "S2");
    EXPECT_THROW(symptoms_of(g, IcdCategory::parse("A00")), UnknownCodeError);
}

TEST(Graph, SymptomsOfIsSortedAndUnique) {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = graph_from_json(random_graph_json(rng, 45));
        for (const auto& code : g.codes()) {
            const auto s = symptoms_of(g, code);
            for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i - 1].id, s[i].id);
            for (const auto& n : s) EXPECT_EQ(n.kind, NodeKind::Symptom);
        }
    }
}

TEST(Traverse, FixturePaths) {
    const auto g = small_graph();
    EXPECT_EQ(khop_traverse(g, "D1", hop_pattern(1)), (std::vector<NodePath>{{"D1", "S1"}, {"D1", "S2"}}));
    EXPECT_EQ(khop_traverse(g, "D1", hop_pattern(3)), (std::vector<NodePath>{{"D1", "S1", "D2", "R1"}}));
    EXPECT_EQ(khop_traverse(g, "S1", hop_pattern(2)), (std::vector<NodePath>{{"S1", "D2", "R1"}}));
}

TEST(Traverse, RejectsBadSpecs) {
    const auto g = small_graph();
    EXPECT_THROW(hop_pattern(4), DomainError);
    EXPECT_THROW(hop_pattern(0), DomainError);
    auto four = hop_pattern(3);
    four.push_back(four.front());
    EXPECT_THROW(khop_traverse(g, "D1", four), DomainError);
    EXPECT_THROW(khop_traverse(g, "nope", hop_pattern(1)), UnknownNodeError);
}

TEST(Traverse, MatchesEdgeEnumerationOracle) {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const auto doc = random_graph_json(rng, 48);
        const auto g = graph_from_json(doc);
        for (int hop = 1; hop <= 3; ++hop) {
            for (const auto& n : g.nodes()) {
                const auto got = khop_traverse(g, n.id, hop_pattern(hop));
                EXPECT_EQ(std::set<NodePath>(got.begin(), got.end()), oracle_paths(doc, n.id, hop_pattern(hop)));
                EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
                if (hop == 3)
                    for (const auto& p : got) EXPECT_NE(p[0], p[2]);
            }
        }
    }
}

TEST(Extract, ParsesCommonListShapes) {
    EXPECT_EQ(parse_symptom_list("[\"fever\", \"cough\"]"), (std::vector<std::string>{"fever", "cough"}));
    EXPECT_EQ(parse_symptom_list("1. Fever\n2) cough\n- Fever\n"), (std::vector<std::string>{"Fever", "cough"}));
    EXPECT_EQ(parse_symptom_list("fever; chills"), (std::vector<std::string>{"fever", "chills"}));
    EXPECT_TRUE(parse_symptom_list("   ").empty());
}

TEST(Extract, MockListLandsInReviewFile) {
    kgtest::TempDir dir;
    gateway::MockBackend backend([](const std::string&) { return std::optional<std::string>("cold abscesses on the neck\nincreased skin temperature"); });
    gateway::BackendConfig cfg;
    const auto r = extract_symptoms(backend, cfg, "Tuberculosis of bones and joints shows cold abscesses.", IcdCategory::parse("A18"));
    EXPECT_EQ(r.candidates, (std::vector<std::string>{"cold abscesses on the neck", "increased skin temperature"}));
    append_review(dir / "review.jsonl", r);
    const auto items = load_review(dir / "review.jsonl");
    ASSERT_EQ(items.size(), 2u);
    EXPECT_EQ(items[0].symptom, "cold abscesses on the neck");
    EXPECT_FALSE(items[0].accepted);
    EXPECT_EQ(items[1].code.code(), "A18");
}

TEST(Extract, EmptyResponseGivesNoCandidates) {
    gateway::MockBackend backend([](const std::string&) { return std::optional<std::string>(""); });
    const auto r = extract_symptoms(backend, {}, "text", IcdCategory::parse("K81"));
    EXPECT_TRUE(r.candidates.empty());
}

TEST(Extract, BackendFailureCarriesRequestId) {
    auto backend = gateway::MockBackend::echo();
    backend.always_fail(gateway::ReplyStatus::Permanent);
    try {
        extract_symptoms(backend, {}, "text", IcdCategory::parse("K81"));
        FAIL();
    } catch (const BackendError& e) {
        EXPECT_FALSE(e.request_id().empty());
    }
}

TEST(Approve, RejectedOnlyLeavesGraphUnchanged) {
    const auto g = small_graph();
    const auto after = approve_symptoms(g, std::vector<ReviewItem>{{IcdCategory::parse("K81"), "fever", false}});
    EXPECT_EQ(graph_to_json(after), graph_to_json(g));
}

TEST(Approve, AcceptedSymptomAddsNodeAndEdgeOnce) {
    const auto g = small_graph();
    const auto k81 = IcdCategory::parse("K81");
    const auto once = approve_symptoms(g, std::vector<ReviewItem>{{k81, "fever", true}});
    EXPECT_EQ(stats(once).n_symptom, stats(g).n_symptom + 1);
    EXPECT_EQ(stats(once).n_di_s, stats(g).n_di_s + 1);
    const auto twice = approve_symptoms(g, std::vector<ReviewItem>{{k81, "fever", true}, {k81, "FEVER", true}});
    EXPECT_EQ(stats(twice), stats(once));
    // An existing label under the same disease is not duplicated.
    const auto existing = approve_symptoms(g, std::vector<ReviewItem>{{k81, "Shortness of Breath", true}});
    EXPECT_EQ(stats(existing), stats(g));
}

TEST(Approve, UnknownCodeIsAnError) {
    kgtest::TempDir dir;
    std::ofstream(dir / "r.jsonl") << R"({"icd":"A00","symptom":"x","accepted":false})" << "\n";
    EXPECT_THROW(approve_symptoms(small_graph(), dir / "r.jsonl"), UnknownCodeError);
}
