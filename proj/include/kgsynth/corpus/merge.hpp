#pragma once

#include <set>
#include <vector>

#include "kgsynth/corpus/corpus.hpp"

namespace kgsynth::corpus {

enum class MergeMode {
    Replace,   // real training notes of the target codes move to test; synthetic ones take their place
    Upsample,  // synthetic notes are appended to train
};

std::string_view to_string(MergeMode mode) noexcept;
MergeMode merge_mode_from_string(std::string_view s);

struct MergeOptions {
    /// Replace only: also move the target codes' validation notes to test.
    bool move_valid_to_test = false;
};

/// Builds a training corpus from real and synthetic notes. `codes` selects
/// the target codes (empty means every code). Only synthetic notes of target
/// codes are added, always to train; valid and test never receive synthetic
/// notes.
///
/// Throws SplitError if a synthetic note is labeled valid/test or a target
/// code is unknown to both sources, and IntegrityError on id collisions.
LabeledCorpus merge_for_training(const LabeledCorpus& real, const std::vector<NoteRecord>& synthetic, MergeMode mode,
                                 const std::set<IcdCategory>& codes, const MergeOptions& options = {});

}  // namespace kgsynth::corpus
