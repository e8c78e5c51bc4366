#include "kgsynth/mkg/extract.hpp"

#include <fstream>
#include <map>
#include <set>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/log.hpp"
#include "kgsynth/common/placeholders.hpp"
#include "kgsynth/common/rng.hpp"
#include "kgsynth/common/text.hpp"
#include "kgsynth/gateway/runner.hpp"

namespace kgsynth::mkg {
namespace {

// "- x", "* x", "• x", "1. x", "2) x" -> "x"
std::string_view strip_marker(std::string_view s) {
    s = text::trim(s);
    for (std::string_view bullet : {"-", "*", "\u2022", "\u2013", "\u2014"})
        if (s.starts_with(bullet)) return text::trim(s.substr(bullet.size()));
    std::size_t i = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) return text::trim(s.substr(i + 1));
    return s;
}

std::string_view strip_trailing_punct(std::string_view s) {
    while (!s.empty() && (s.back() == '.' || s.back() == ',' || s.back() == ';')) s.remove_suffix(1);
    return text::trim(s);
}

bool has_word(std::string_view s) { return !text::words(s, false).empty(); }

}  // namespace

std::vector<std::string> parse_symptom_list(std::string_view response) {
    const auto body = text::trim(response);
    if (body.empty()) return {};

    std::vector<std::string> pieces;
    if (body.front() == '[') {
        const auto parsed = json::parse(body, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_array())
            throw UnparseableResponseError(std::string(response), "response looks like JSON but is not an array");
        for (const auto& item : parsed) {
            if (!item.is_string())
                throw UnparseableResponseError(std::string(response), "JSON array holds a non-string item");
            pieces.push_back(item.get<std::string>());
        }
    } else {
        std::size_t start = 0;
        for (std::size_t i = 0; i <= body.size(); ++i) {
            if (i == body.size() || body[i] == '\n' || body[i] == ';') {
                pieces.emplace_back(body.substr(start, i - start));
                start = i + 1;
            }
        }
    }

    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& piece : pieces) {
        const auto phrase = strip_trailing_punct(strip_marker(piece));
        if (!has_word(phrase)) continue;
        if (seen.insert(text::casefold(phrase)).second) out.emplace_back(phrase);
    }
    if (out.empty()) throw UnparseableResponseError(std::string(response), "no symptom phrase found in response");
    return out;
}

ExtractionResult extract_symptoms(gateway::Backend& backend, const gateway::BackendConfig& config,
                                  std::string_view manifestation_text, const IcdCategory& code,
                                  std::string_view prompt_template) {
    if (text::trim(manifestation_text).empty()) throw DomainError("empty manifestation text");
    const auto prompt = fill_placeholders(prompt_template, {{"text", std::string(manifestation_text)}});
    const auto record = gateway::generate(backend, config, prompt, "extract-" + code.code() + "-" + hex64(fnv1a64(prompt)).substr(0, 8));
    if (!record.ok()) throw BackendError(record.request_id, "symptom extraction failed: " + record.error);

    ExtractionResult result{code, {}, record.request_id, *record.response_text};
    result.candidates = parse_symptom_list(result.raw_response);
    if (result.candidates.empty())
        log::warn("backend returned no symptom candidates", {{"code", code.code()}, {"request_id", record.request_id}});
    return result;
}

void append_review(const fs::path& path, const ExtractionResult& result) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot open review file " + path.string());
    for (const auto& symptom : result.candidates)
        out << canonical_dump({{"icd", result.code.code()}, {"symptom", symptom}, {"accepted", false}}) << '\n';
}

std::vector<ReviewItem> load_review(const fs::path& path) {
    std::vector<ReviewItem> items;
    std::size_t i = 0;
    for (const auto& row : read_jsonl(path)) {
        ++i;
        try {
            items.push_back({IcdCategory::parse(row.at("icd").get<std::string>()), row.at("symptom").get<std::string>(),
                             row.at("accepted").get<bool>()});
        } catch (const json::exception& e) {
            throw ParseError(path.string() + " item " + std::to_string(i) + ": " + e.what());
        } catch (const MalformedCodeError& e) {
            throw ParseError(path.string() + " item " + std::to_string(i) + ": " + e.what());
        }
    }
    return items;
}

KnowledgeGraph approve_symptoms(const KnowledgeGraph& graph, const std::vector<ReviewItem>& review) {
    auto nodes = graph.nodes();
    auto edges = graph.edges();

    std::map<std::string, std::string> symptom_by_label;  // casefolded label -> id
    for (const auto& n : nodes)
        if (n.kind == NodeKind::Symptom) symptom_by_label.emplace(text::casefold(n.label), n.id);
    std::set<std::pair<std::string, std::string>> linked;  // (disease, casefolded label)
    for (const auto& e : edges)
        if (e.relation == Relation::DiseaseSymptom)
            linked.emplace(e.from, text::casefold(graph.node(e.to).label));

    std::set<std::string> ids;
    for (const auto& n : nodes) ids.insert(n.id);
    std::size_t counter = 0;

    for (const auto& item : review) {
        const auto& disease = graph.diseases_with_code(item.code).front();
        if (!item.accepted) continue;
        const auto label = std::string(text::trim(item.symptom));
        if (label.empty()) continue;
        const auto key = text::casefold(label);
        if (!linked.emplace(disease, key).second) continue;

        auto it = symptom_by_label.find(key);
        if (it == symptom_by_label.end()) {
            std::string id;
            do {
                id = "S-auto-" + std::to_string(++counter);
            } while (ids.contains(id));
            ids.insert(id);
            nodes.push_back({id, NodeKind::Symptom, label, std::nullopt, std::nullopt});
            it = symptom_by_label.emplace(key, id).first;
        }
        edges.push_back({disease, it->second, Relation::DiseaseSymptom});
    }
    return KnowledgeGraph::build(std::move(nodes), std::move(edges));
}

KnowledgeGraph approve_symptoms(const KnowledgeGraph& graph, const fs::path& review_file) {
    return approve_symptoms(graph, load_review(review_file));
}

}  // namespace kgsynth::mkg
