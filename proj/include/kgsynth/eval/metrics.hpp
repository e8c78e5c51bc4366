#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "kgsynth/common/icd.hpp"
#include "kgsynth/common/io.hpp"

namespace kgsynth::eval {

/// Every label ranked by descending score; equal scores fall back to label
/// order so rankings are reproducible.
struct RankedPrediction {
    std::string record_id;
    std::vector<IcdCategory> labels;
    std::vector<double> scores;
};

RankedPrediction rank_scores(std::string record_id, const std::vector<IcdCategory>& labels,
                             std::span<const double> scores);

/// True when `truth` is among the first k labels.
bool hit(const RankedPrediction& prediction, const IcdCategory& truth, std::size_t k);

/// Fraction of records whose truth is in their top k. Throws DomainError on a
/// length mismatch, k == 0 or empty input.
double hit_at_k(std::span<const RankedPrediction> predictions, std::span<const IcdCategory> truths, std::size_t k);

struct HitScores {
    double hit1 = 0.0;
    double hit3 = 0.0;
    double hit5 = 0.0;
    std::size_t n = 0;

    bool operator==(const HitScores&) const = default;
};

json to_json(const HitScores& h);

struct EvalReport {
    HitScores overall;
    std::map<IcdCategory, HitScores> per_code;
    /// Rows: true label, columns: top-1 prediction, both indexed by `labels`.
    std::vector<IcdCategory> labels;
    std::vector<std::vector<std::size_t>> confusion;
    json metadata = json::object();

    bool operator==(const EvalReport&) const = default;
};

/// hit@{1,3,5} overall and per true code, plus the top-1 confusion matrix
/// over the union of predicted and true labels.
EvalReport evaluate(std::span<const RankedPrediction> predictions, std::span<const IcdCategory> truths,
                    json metadata = json::object());

json report_to_json(const EvalReport& report);
EvalReport report_from_json(const json& j);

struct ConfusionPair {
    IcdCategory first;  // first < second
    IcdCategory second;
    std::size_t mass = 0;  // C[first][second] + C[second][first]

    bool operator==(const ConfusionPair&) const = default;
};

/// Every unordered pair of distinct labels ranked by mass, descending; ties
/// by (first, second).
std::vector<ConfusionPair> confusion_pairs(const EvalReport& report);

}  // namespace kgsynth::eval
