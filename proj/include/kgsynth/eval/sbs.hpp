#pragma once

#include <span>
#include <string>
#include <vector>

#include "kgsynth/common/rng.hpp"
#include "kgsynth/corpus/corpus.hpp"

namespace kgsynth::eval {

struct SbsPair {
    std::string pair_id;
    std::string text_1;
    std::string text_2;
    int generated_position = 1;  // 1 or 2
    IcdCategory code;
    std::string real_id;
    std::string synthetic_id;
};

struct SbsSheet {
    std::vector<SbsPair> pairs;
    /// Median word count of the selected sentences, real and synthetic together.
    double median_words = 0.0;
    /// Pairs whose synthetic side came from another code for lack of a match.
    std::size_t fallbacks = 0;
};

/// n_pairs real/synthetic sentence pairs. Each pair's code is drawn in
/// proportion to its frequency among the real notes; one note per side of
/// that code is picked uniformly, then one sentence of each. The order of the
/// two sentences is shuffled per pair. Throws DomainError when either side is
/// empty.
SbsSheet build_sbs_sheet(const corpus::LabeledCorpus& real, std::span<const corpus::NoteRecord> synthetic,
                         std::size_t n_pairs, Rng& rng);

/// "pair_id,text_1,text_2" with header.
std::string sbs_sheet_csv(const SbsSheet& sheet);
/// "pair_id,generated_position" with header.
std::string sbs_key_csv(const SbsSheet& sheet);

struct SbsScore {
    std::size_t correct = 0;
    std::size_t answered = 0;
    std::size_t unanswered = 0;
    double accuracy = 0.0;  // correct / answered
};

/// Both inputs are CSV with a header; answers are "pair_id,answer" where the
/// answer names the position the annotator believes is generated. Throws
/// ParseError for unknown pair ids or answers other than 1 and 2.
SbsScore score_sbs(std::string_view key_csv, std::string_view answers_csv);

}  // namespace kgsynth::eval
