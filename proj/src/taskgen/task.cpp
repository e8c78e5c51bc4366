#include "kgsynth/taskgen/task.hpp"

#include <algorithm>
#include <set>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/log.hpp"

namespace kgsynth::taskgen {

std::size_t draw_symptom_count(Rng& rng) { return 1 + rng.uniform_index(kMaxSymptomsPerEntry); }

std::vector<std::string> sample_symptoms(std::span<const std::string> pool, Rng& rng) {
    if (pool.empty()) throw NoSymptomsError("empty symptom pool");
    const auto k = std::min(draw_symptom_count(rng), pool.size());
    std::vector<std::string> out;
    out.reserve(k);
    for (auto i : rng.sample_without_replacement(pool.size(), k)) out.push_back(pool[i]);
    return out;
}

std::vector<std::string> symptom_labels(const mkg::KnowledgeGraph& graph, const IcdCategory& code) {
    std::vector<std::string> labels;
    std::set<std::string> seen;
    for (const auto& id : graph.symptom_ids(code)) {
        const auto& label = graph.node(id).label;
        if (seen.insert(label).second) labels.push_back(label);
    }
    return labels;
}

std::vector<std::string> sample_symptoms(const mkg::KnowledgeGraph& graph, const IcdCategory& code, Rng& rng) {
    const auto labels = symptom_labels(graph, code);
    if (labels.empty()) throw NoSymptomsError("no symptoms linked to " + code.code());
    return sample_symptoms(std::span<const std::string>(labels), rng);
}

std::string_view to_string(PromptKind kind) noexcept { return kind == PromptKind::Full ? "full" : "baseline"; }

std::string GenerationTaskEntry::key() const {
    return std::string(to_string(kind)) + ":" + code.code() + ":" + std::to_string(draw);
}

json entry_to_json(const GenerationTaskEntry& e) {
    json j{{"code", e.code.code()}, {"disease", e.disease}, {"symptoms", e.symptoms},
           {"kind", to_string(e.kind)}, {"seed", e.seed},       {"draw", e.draw}};
    if (e.example) j["example"] = *e.example;
    return j;
}

GenerationTaskEntry entry_from_json(const json& j) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind != "full" && kind != "baseline") throw ParseError("unknown task kind '" + kind + "'");
        GenerationTaskEntry e{IcdCategory::parse(j.at("code").get<std::string>()),
                              j.value("disease", std::string{}),
                              j.at("symptoms").get<std::vector<std::string>>(),
                              std::nullopt,
                              kind == "full" ? PromptKind::Full : PromptKind::Baseline,
                              j.at("seed").get<std::uint64_t>(),
                              j.at("draw").get<std::uint64_t>()};
        if (j.contains("example") && !j["example"].is_null()) e.example = j["example"].get<std::string>();
        return e;
    } catch (const json::exception& e) {
        throw ParseError(std::string("task entry: ") + e.what());
    } catch (const MalformedCodeError& e) {
        throw ParseError(std::string("task entry: ") + e.what());
    }
}

Rng entry_rng(std::uint64_t seed, const IcdCategory& code, std::uint64_t draw) {
    return Rng(derive_seed(derive_seed(seed, code.code()), draw));
}

std::vector<CodeStats> collect_code_stats(const mkg::KnowledgeGraph& graph, const corpus::LabeledCorpus& corpus,
                                          std::vector<IcdCategory>* skipped) {
    std::map<IcdCategory, std::size_t> examples;
    for (const auto* r : corpus.in_split(corpus::Split::Train)) ++examples[r->code];
    std::vector<CodeStats> out;
    for (const auto& [code, n] : examples) {
        if (!graph.has_code(code)) {
            if (skipped) skipped->push_back(code);
            continue;
        }
        out.push_back({code, symptom_labels(graph, code).size(), n});
    }
    return out;
}

GenerationTask build_task(const mkg::KnowledgeGraph& graph, const corpus::LabeledCorpus& corpus,
                          const TaskOptions& options) {
    if (corpus.count(corpus::Split::Train) == 0) throw DomainError("corpus has no training records");

    GenerationTask task;
    const auto stats = collect_code_stats(graph, corpus, &task.skipped_codes);
    for (const auto& code : task.skipped_codes)
        log::warn("code present in corpus but absent from graph; skipped", {{"code", code.code()}});

    std::map<IcdCategory, std::size_t> exceptions;
    for (const auto& [code, count] : options.exceptions) {
        const auto it = std::find_if(stats.begin(), stats.end(), [&](const auto& s) { return s.code == code; });
        if (it == stats.end() || it->n_symp == 0 || it->n_exmp == 0) {
            log::warn("exception code has no symptoms or examples; dropped", {{"code", code.code()}});
            continue;
        }
        exceptions.emplace(code, count);
    }

    std::vector<GenerationWeight> weights;
    for (const auto& s : stats) weights.push_back(code_weight(s));
    task.allocation = allocate_counts(std::move(weights), options.total, exceptions);

    std::map<IcdCategory, std::vector<const corpus::NoteRecord*>> notes;
    for (const auto* r : corpus.in_split(corpus::Split::Train)) notes[r->code].push_back(r);
    for (auto& [code, list] : notes)
        std::sort(list.begin(), list.end(), [](const auto* a, const auto* b) { return a->id < b->id; });

    for (const auto& alloc : task.allocation) {
        if (alloc.allocated == 0) continue;
        const auto pool = symptom_labels(graph, alloc.code);
        const auto& examples = notes.at(alloc.code);
        const auto& disease = graph.node(graph.diseases_with_code(alloc.code).front()).label;
        for (std::uint64_t draw = 0; draw < alloc.allocated; ++draw) {
            auto rng = entry_rng(options.seed, alloc.code, draw);
            GenerationTaskEntry entry{alloc.code, disease, {}, std::nullopt, PromptKind::Full, options.seed, draw};
            entry.symptoms = sample_symptoms(std::span<const std::string>(pool), rng);
            entry.example = examples[rng.uniform_index(examples.size())]->text;
            task.full.push_back(std::move(entry));
            if (options.baseline)
                task.baseline.push_back(
                    {alloc.code, disease, {}, std::nullopt, PromptKind::Baseline, options.seed, draw});
        }
    }
    return task;
}

void save_task(const std::vector<GenerationTaskEntry>& entries, const fs::path& path) {
    std::vector<json> rows;
    rows.reserve(entries.size());
    for (const auto& e : entries) rows.push_back(entry_to_json(e));
    write_jsonl_atomic(path, rows);
}

std::vector<GenerationTaskEntry> load_task(const fs::path& path) {
    std::vector<GenerationTaskEntry> out;
    for (const auto& row : read_jsonl(path)) out.push_back(entry_from_json(row));
    return out;
}

}  // namespace kgsynth::taskgen
