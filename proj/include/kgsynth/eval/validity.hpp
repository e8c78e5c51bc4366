#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kgsynth/corpus/corpus.hpp"
#include "kgsynth/eval/classifier.hpp"

namespace kgsynth::eval {

struct ValidityConfig {
    std::size_t n_models = 5;
    std::size_t k = 5;
    std::size_t quorum = 2;  // inclusive: votes >= quorum is valid
    std::vector<std::uint64_t> seeds;
    TrainingParams params;

    /// n_models seeds derived from one base seed.
    static std::vector<std::uint64_t> derived_seeds(std::uint64_t base, std::size_t n);

    /// Every problem found, empty when the config is usable.
    std::vector<std::string> problems() const;
    /// Throws ConfigError listing all problems.
    void validate() const;
};

/// votes[r] = number of models whose top k contains truths[r].
/// per_model[m][r] is model m's ranking for record r.
std::vector<std::size_t> count_votes(const std::vector<std::vector<RankedPrediction>>& per_model,
                                     std::span<const IcdCategory> truths, std::size_t k);

struct ValidityResult {
    std::vector<corpus::NoteRecord> valid;
    std::vector<corpus::NoteRecord> invalid;
    /// Parallel to the input records.
    std::vector<std::size_t> votes;
    std::vector<bool> accepted;
    std::vector<std::vector<RankedPrediction>> per_model;
    std::vector<std::uint64_t> seeds;
};

/// Splits records by vote count, preserving input order.
ValidityResult partition_by_votes(std::span<const corpus::NoteRecord> records,
                                  std::vector<std::vector<RankedPrediction>> per_model, const ValidityConfig& config);

/// Trains one classifier per seed on the real training split (in parallel)
/// and keeps a synthetic record when its code is in the top k of at least
/// `quorum` of them. Throws ConfigError or TrainingError.
ValidityResult validity_filter(std::span<const corpus::NoteRecord> synthetic, const corpus::LabeledCorpus& real,
                               const ValidityConfig& config);

json validity_votes_to_json(std::span<const corpus::NoteRecord> records, const ValidityResult& result);

}  // namespace kgsynth::eval
