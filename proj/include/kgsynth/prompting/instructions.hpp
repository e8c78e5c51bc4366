#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "kgsynth/common/rng.hpp"
#include "kgsynth/common/text.hpp"
#include "kgsynth/corpus/corpus.hpp"
#include "kgsynth/mkg/graph.hpp"
#include "kgsynth/prompting/templates.hpp"

namespace kgsynth::prompting {

enum class Provenance { GraphHop1, GraphHop2, GraphHop3, NoteContinuation, NoteGeneration };

std::string_view to_string(Provenance p) noexcept;

struct InstructionSample {
    std::string instruction;
    std::string input;
    std::string output;
    Provenance provenance = Provenance::GraphHop1;

    bool operator==(const InstructionSample&) const = default;
};

json sample_to_json(const InstructionSample& s);
void save_samples(const std::vector<InstructionSample>& samples, const fs::path& path);

/// Graph facts behind one hop sample: the entity the question is about and
/// the answer assembled along the traversed paths.
///   hop 1 (Di-S):       per disease, its symptoms.
///   hop 2 (S-Di-Dr):    per symptom, each disease showing it with its drugs.
///   hop 3 (Di-S-Di-Dr): per (disease, other disease) pair sharing a symptom,
///                       the shared symptoms and the other disease's drugs.
struct HopGroup {
    std::string subject;        // node id the question starts from
    std::string other_disease;  // hop 3 only
    std::vector<std::string> symptoms;  // labels
    std::vector<std::string> drugs;     // labels
    /// Hop 2: intermediate disease label -> its drug labels.
    std::map<std::string, std::vector<std::string>> drugs_by_disease;
};

/// Groups in subject order (then other disease), derived from khop_traverse.
std::vector<HopGroup> hop_groups(const mkg::KnowledgeGraph& graph, int hop);

/// One sample per hop group; `limit` > 0 keeps a uniform subset of that size
/// in group order. Throws DomainError for hop outside 1..3.
std::vector<InstructionSample> build_hop_samples(const mkg::KnowledgeGraph& graph, int hop,
                                                 const TemplateSet& templates, std::size_t limit, Rng& rng);

struct ContinuationOptions {
    std::size_t min_chars_per_side = 20;
    text::SentenceOptions sentences;
};

struct BuildResult {
    std::vector<InstructionSample> samples;
    std::size_t skipped = 0;
};

/// For every training note, splits at a sentence boundary chosen uniformly
/// among interior boundaries leaving at least `min_chars_per_side` code
/// points on each side. input + separator + output reproduces the note,
/// where the separator is the whitespace at the boundary. Notes without such
/// a boundary are skipped and counted.
BuildResult build_continuation_samples(const corpus::LabeledCorpus& corpus, const TemplateSet& templates, Rng& rng,
                                       const ContinuationOptions& options = {});

/// For every training note whose code has graph symptoms, samples priors
/// and asks for the note; output is the real note. Age/sex from record meta
/// are appended to the instruction when present.
BuildResult build_generation_samples(const corpus::LabeledCorpus& corpus, const mkg::KnowledgeGraph& graph,
                                     const TemplateSet& templates, Rng& rng);

}  // namespace kgsynth::prompting
