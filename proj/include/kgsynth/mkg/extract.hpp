#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kgsynth/gateway/backend.hpp"
#include "kgsynth/mkg/graph.hpp"

namespace kgsynth::mkg {

/// Default extraction prompt; `{text}` receives the manifestation passage.
inline constexpr std::string_view kDefaultExtractionPrompt =
    "Identify the symptoms described in the following clinical manifestation text. "
    "Answer with one symptom per line and nothing else.\n\n{text}";

struct ExtractionResult {
    IcdCategory code;
    std::vector<std::string> candidates;
    std::string request_id;
    std::string raw_response;
};

/// Splits a backend answer into symptom phrases. Accepts a JSON array of
/// strings or one phrase per line / per ';', with list markers stripped.
/// Duplicates (case-folded) are dropped, first spelling kept. An empty
/// answer gives an empty list; a non-empty answer with no phrase in it throws
/// UnparseableResponseError carrying the raw text.
std::vector<std::string> parse_symptom_list(std::string_view response);

/// Asks the backend for the symptoms in `manifestation_text`. Throws
/// BackendError (with request id) when generation fails.
ExtractionResult extract_symptoms(gateway::Backend& backend, const gateway::BackendConfig& config,
                                  std::string_view manifestation_text, const IcdCategory& code,
                                  std::string_view prompt_template = kDefaultExtractionPrompt);

struct ReviewItem {
    IcdCategory code;
    std::string symptom;
    bool accepted = false;
};

/// Appends candidates to a review file, all marked not accepted.
void append_review(const fs::path& path, const ExtractionResult& result);

/// Throws ParseError.
std::vector<ReviewItem> load_review(const fs::path& path);

/// Commits accepted review items. An accepted label already linked to the
/// disease (case-folded match) is a no-op; a label matching an existing
/// symptom node elsewhere reuses that node; anything else becomes a new
/// symptom node. Items attach to the first disease (by id) with the code.
/// Throws UnknownCodeError for a code with no disease.
KnowledgeGraph approve_symptoms(const KnowledgeGraph& graph, const std::vector<ReviewItem>& review);
KnowledgeGraph approve_symptoms(const KnowledgeGraph& graph, const fs::path& review_file);

}  // namespace kgsynth::mkg
