#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgsynth/common/io.hpp"
#include "kgsynth/common/rng.hpp"
#include "kgsynth/corpus/corpus.hpp"
#include "kgsynth/mkg/graph.hpp"
#include "kgsynth/taskgen/weights.hpp"

namespace kgsynth::taskgen {

inline constexpr std::size_t kMaxSymptomsPerEntry = 5;

/// Number of symptoms to request for one entry: uniform on 1..5.
std::size_t draw_symptom_count(Rng& rng);

/// Draws k = draw_symptom_count(rng), then min(k, pool size) distinct labels
/// uniformly without replacement, in draw order.
std::vector<std::string> sample_symptoms(std::span<const std::string> pool, Rng& rng);

/// Same, over the code's symptom labels in the graph (unique labels, node id
/// order). Throws UnknownCodeError or NoSymptomsError.
std::vector<std::string> sample_symptoms(const mkg::KnowledgeGraph& graph, const IcdCategory& code, Rng& rng);

/// Unique symptom labels of a code, ordered by node id.
std::vector<std::string> symptom_labels(const mkg::KnowledgeGraph& graph, const IcdCategory& code);

enum class PromptKind { Full, Baseline };

std::string_view to_string(PromptKind kind) noexcept;

/// One generation job. A Full entry carries 1..5 symptoms and a real example
/// note; a Baseline entry carries only the disease.
struct GenerationTaskEntry {
    IcdCategory code;
    std::string disease;  // display name used in prompts
    std::vector<std::string> symptoms;
    std::optional<std::string> example;
    PromptKind kind = PromptKind::Full;
    std::uint64_t seed = 0;  // run seed
    std::uint64_t draw = 0;  // index of the entry within its code

    /// "<kind>:<code>:<draw>", unique within a task.
    std::string key() const;

    bool operator==(const GenerationTaskEntry&) const = default;
};

json entry_to_json(const GenerationTaskEntry& entry);
/// Throws ParseError.
GenerationTaskEntry entry_from_json(const json& j);

/// Per-entry generator: derived from (seed, code, draw) only, so any entry can
/// be regenerated on its own and codes can be processed in parallel.
Rng entry_rng(std::uint64_t seed, const IcdCategory& code, std::uint64_t draw);

struct TaskOptions {
    std::size_t total = 0;
    std::uint64_t seed = 0;
    std::map<IcdCategory, std::size_t> exceptions = default_exceptions();
    bool baseline = false;
};

struct GenerationTask {
    std::vector<GenerationTaskEntry> full;
    std::vector<GenerationTaskEntry> baseline;  // same per-code counts, when requested
    std::vector<GenerationWeight> allocation;
    std::vector<IcdCategory> skipped_codes;  // in the corpus but not in the graph
};

/// Counts per training-split code: n_symp from the graph, n_exmp from the
/// corpus. Codes missing from the graph go to `skipped`.
std::vector<CodeStats> collect_code_stats(const mkg::KnowledgeGraph& graph, const corpus::LabeledCorpus& corpus,
                                          std::vector<IcdCategory>* skipped = nullptr);

/// Allocates `options.total` entries over the corpus codes and fills each
/// Full entry with sampled symptoms and a uniformly drawn real training note
/// of that code (notes may repeat across entries). Exception codes lacking
/// symptoms or examples are dropped with a warning. Deterministic given the
/// inputs and seed.
GenerationTask build_task(const mkg::KnowledgeGraph& graph, const corpus::LabeledCorpus& corpus,
                          const TaskOptions& options);

void save_task(const std::vector<GenerationTaskEntry>& entries, const fs::path& path);
std::vector<GenerationTaskEntry> load_task(const fs::path& path);

}  // namespace kgsynth::taskgen
