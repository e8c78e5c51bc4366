#include "kgsynth/prompting/instructions.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "kgsynth/common/error.hpp"
#include "kgsynth/mkg/traverse.hpp"
#include "kgsynth/prompting/render.hpp"
#include "kgsynth/taskgen/task.hpp"

namespace kgsynth::prompting {
namespace {

void push_unique(std::vector<std::string>& list, const std::string& value) {
    if (std::find(list.begin(), list.end(), value) == list.end()) list.push_back(value);
}

std::vector<const mkg::GraphNode*> nodes_of_kind(const mkg::KnowledgeGraph& graph, mkg::NodeKind kind) {
    std::vector<const mkg::GraphNode*> out;
    for (const auto& n : graph.nodes())
        if (n.kind == kind) out.push_back(&n);
    return out;
}

std::string meta_string(const json& meta, const char* key) {
    if (!meta.contains(key) || meta[key].is_null()) return {};
    return meta[key].is_string() ? meta[key].get<std::string>() : meta[key].dump();
}

}  // namespace

std::string_view to_string(Provenance p) noexcept {
    switch (p) {
        case Provenance::GraphHop1: return "graph_hop1";
        case Provenance::GraphHop2: return "graph_hop2";
        case Provenance::GraphHop3: return "graph_hop3";
        case Provenance::NoteContinuation: return "note_continuation";
        case Provenance::NoteGeneration: return "note_generation";
    }
    return "?";
}

json sample_to_json(const InstructionSample& s) {
    return {{"instruction", s.instruction}, {"input", s.input}, {"output", s.output},
            {"provenance", to_string(s.provenance)}};
}

void save_samples(const std::vector<InstructionSample>& samples, const fs::path& path) {
    std::vector<json> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples) rows.push_back(sample_to_json(s));
    write_jsonl_atomic(path, rows);
}

std::vector<HopGroup> hop_groups(const mkg::KnowledgeGraph& graph, int hop) {
    const auto pattern = mkg::hop_pattern(hop);
    const auto label = [&](const std::string& id) -> const std::string& { return graph.node(id).label; };
    std::vector<HopGroup> groups;
    const auto start_kind = hop == 2 ? mkg::NodeKind::Symptom : mkg::NodeKind::Disease;
    for (const auto* start : nodes_of_kind(graph, start_kind)) {
        const auto paths = mkg::khop_traverse(graph, start->id, pattern);
        if (paths.empty()) continue;
        if (hop == 1) {
            HopGroup g{start->id, {}, {}, {}, {}};
            for (const auto& p : paths) push_unique(g.symptoms, label(p[1]));
            groups.push_back(std::move(g));
        } else if (hop == 2) {
            HopGroup g{start->id, {}, {start->label}, {}, {}};
            for (const auto& p : paths) {
                push_unique(g.drugs, label(p[2]));
                push_unique(g.drugs_by_disease[label(p[1])], label(p[2]));
            }
            groups.push_back(std::move(g));
        } else {
            std::map<std::string, HopGroup> by_other;
            for (const auto& p : paths) {
                auto& g = by_other.try_emplace(p[2], HopGroup{start->id, p[2], {}, {}, {}}).first->second;
                push_unique(g.symptoms, label(p[1]));
                push_unique(g.drugs, label(p[3]));
            }
            for (auto& [_, g] : by_other) groups.push_back(std::move(g));
        }
    }
    return groups;
}

std::vector<InstructionSample> build_hop_samples(const mkg::KnowledgeGraph& graph, int hop,
                                                 const TemplateSet& templates, std::size_t limit, Rng& rng) {
    auto groups = hop_groups(graph, hop);
    if (limit > 0 && groups.size() > limit) {
        auto keep = rng.sample_without_replacement(groups.size(), limit);
        std::sort(keep.begin(), keep.end());
        std::vector<HopGroup> subset;
        for (auto i : keep) subset.push_back(std::move(groups[i]));
        groups = std::move(subset);
    }

    const auto kind = hop == 1 ? TemplateKind::Hop1 : hop == 2 ? TemplateKind::Hop2 : TemplateKind::Hop3;
    const auto provenance = hop == 1 ? Provenance::GraphHop1 : hop == 2 ? Provenance::GraphHop2 : Provenance::GraphHop3;
    const auto& tmpl = templates.get(kind);

    std::vector<InstructionSample> out;
    for (const auto& g : groups) {
        InstructionSample s{{}, {}, {}, provenance};
        const auto& subject = graph.node(g.subject).label;
        if (hop == 1) {
            s.instruction = render(tmpl, {{"disease", subject}}, rng);
            s.output = text::join(g.symptoms, kSymptomSeparator);
        } else if (hop == 2) {
            s.instruction = render(tmpl, {{"symptoms", subject}}, rng);
            std::vector<std::string> lines;
            for (const auto& [disease, drugs] : g.drugs_by_disease)
                lines.push_back(disease + ": " + text::join(drugs, kSymptomSeparator));
            s.output = text::join(lines, "\n");
        } else {
            s.instruction =
                render(tmpl, {{"disease", subject}, {"symptoms", text::join(g.symptoms, kSymptomSeparator)}}, rng);
            s.output = graph.node(g.other_disease).label + ": " + text::join(g.drugs, kSymptomSeparator);
        }
        out.push_back(std::move(s));
    }
    return out;
}

BuildResult build_continuation_samples(const corpus::LabeledCorpus& corpus, const TemplateSet& templates, Rng& rng,
                                       const ContinuationOptions& options) {
    const auto& tmpl = templates.get(TemplateKind::Continuation);
    BuildResult result;
    for (const auto* note : corpus.in_split(corpus::Split::Train)) {
        const std::string_view body = note->text;
        const auto spans = text::sentence_spans(body, options.sentences);
        std::vector<std::size_t> eligible;
        for (std::size_t b = 0; b + 1 < spans.size(); ++b) {
            const auto left = text::codepoint_count(body.substr(0, spans[b].end));
            const auto right = text::codepoint_count(body.substr(spans[b + 1].begin));
            if (left >= options.min_chars_per_side && right >= options.min_chars_per_side) eligible.push_back(b);
        }
        if (eligible.empty()) {
            ++result.skipped;
            continue;
        }
        const auto b = eligible[rng.uniform_index(eligible.size())];
        InstructionSample s{{}, std::string(body.substr(0, spans[b].end)), std::string(body.substr(spans[b + 1].begin)),
                            Provenance::NoteContinuation};
        s.instruction = render(tmpl, {{"note_prefix", s.input}}, rng);
        result.samples.push_back(std::move(s));
    }
    return result;
}

BuildResult build_generation_samples(const corpus::LabeledCorpus& corpus, const mkg::KnowledgeGraph& graph,
                                     const TemplateSet& templates, Rng& rng) {
    const auto& tmpl = templates.get(TemplateKind::GenerationFromPriors);
    BuildResult result;
    std::map<IcdCategory, std::vector<std::string>> pools;
    for (const auto* note : corpus.in_split(corpus::Split::Train)) {
        if (!graph.has_code(note->code)) {
            ++result.skipped;
            continue;
        }
        auto it = pools.find(note->code);
        if (it == pools.end()) it = pools.emplace(note->code, taskgen::symptom_labels(graph, note->code)).first;
        if (it->second.empty()) {
            ++result.skipped;
            continue;
        }
        const auto priors = taskgen::sample_symptoms(std::span<const std::string>(it->second), rng);
        const auto& disease = graph.node(graph.diseases_with_code(note->code).front()).label;
        InstructionSample s{{}, {}, note->text, Provenance::NoteGeneration};
        s.instruction = render(tmpl, {{"symptoms", text::join(priors, kSymptomSeparator)}, {"disease", disease}}, rng);

        std::vector<std::string> demographics;
        if (const auto age = meta_string(note->meta, "age"); !age.empty()) demographics.push_back("age: " + age);
        if (const auto sex = meta_string(note->meta, "sex"); !sex.empty()) demographics.push_back("sex: " + sex);
        if (!demographics.empty()) s.instruction += "\n(" + text::join(demographics, ", ") + ")";
        result.samples.push_back(std::move(s));
    }
    return result;
}

}  // namespace kgsynth::prompting
