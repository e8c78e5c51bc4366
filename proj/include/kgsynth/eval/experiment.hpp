#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "kgsynth/corpus/merge.hpp"
#include "kgsynth/eval/classifier.hpp"

namespace kgsynth::eval {

inline constexpr std::string_view kLinearModelKind = "tfidf_logreg";

struct ExperimentSpec {
    corpus::MergeMode mode = corpus::MergeMode::Upsample;
    std::set<IcdCategory> codes;  // empty: every code
    std::string model_kind{kLinearModelKind};
    std::size_t n_runs = 3;
    std::uint64_t seed = 0;
    TrainingParams params;
    corpus::MergeOptions merge;
};

struct RunReport {
    std::uint64_t seed = 0;
    EvalReport report;
};

struct ExperimentResult {
    std::vector<RunReport> runs;
    HitScores mean_overall;
    /// Mean over runs for each targeted code (all test codes when none are targeted).
    std::map<IcdCategory, HitScores> mean_per_code;
    json merged_sizes;
};

/// Seed of run i, derived from the experiment seed.
std::uint64_t run_seed(std::uint64_t seed, std::size_t run);

/// Merges real and synthetic notes, trains n_runs classifiers with distinct
/// seeds (in parallel), scores each on the test split and averages. In
/// Replace mode the merged train split is checked to hold no real note of a
/// targeted code. Throws ConfigError for an unknown model kind or n_runs 0,
/// SplitError when the test split is empty.
ExperimentResult run_experiment(const corpus::LabeledCorpus& real, const std::vector<corpus::NoteRecord>& synthetic,
                                const ExperimentSpec& spec);

/// Per-code entries are limited to the targeted codes.
json experiment_to_json(const ExperimentResult& result, const ExperimentSpec& spec);

}  // namespace kgsynth::eval
