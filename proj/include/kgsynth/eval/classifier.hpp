#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kgsynth/corpus/corpus.hpp"
#include "kgsynth/eval/metrics.hpp"
#include "kgsynth/eval/tfidf.hpp"

namespace kgsynth::eval {

struct TrainingParams {
    double learning_rate = 0.5;
    double l2 = 1e-4;
    int max_epochs = 500;
    double tolerance = 1e-6;  // on the gradient norm
    double init_scale = 0.01;
    TokenizerConfig tokenizer;
};

json to_json(const TrainingParams& p);
TrainingParams training_params_from_json(const json& j);

/// Mean cross-entropy of softmax(X W^T + b) plus (l2 / 2) ||W||^2, and its
/// gradient. `targets` are label indices into the rows of W.
struct LossAndGradient {
    double loss = 0.0;
    Eigen::MatrixXd grad_weights;
    Eigen::VectorXd grad_bias;
};

LossAndGradient softmax_loss_and_gradient(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                                          const SparseRows& features, std::span<const int> targets, double l2);

/// Row-wise softmax of a logit matrix, shifted by the row max.
Eigen::MatrixXd softmax_rows(Eigen::MatrixXd logits);

/// TF-IDF features feeding a multinomial logistic regression.
struct ClassifierModel {
    TfidfVocabulary vocabulary;
    std::vector<IcdCategory> labels;  // sorted, unique; row order of weights
    Eigen::MatrixXd weights;          // labels x vocabulary
    Eigen::VectorXd bias;
    std::uint64_t seed = 0;
    TrainingParams params;
    std::vector<double> loss_history;  // one entry per epoch
    int epochs_run = 0;

    Eigen::VectorXd probabilities(std::string_view text) const;
    RankedPrediction predict(std::string record_id, std::string_view text) const;
    std::vector<RankedPrediction> predict(std::span<const corpus::NoteRecord* const> records) const;
};

/// Full-batch gradient descent from a seeded random start. Stops after
/// max_epochs or once the gradient norm drops below the tolerance.
/// Identical inputs and seed give bitwise-identical weights. Throws
/// TrainingError when fewer than two labels are present.
ClassifierModel train_classifier(std::span<const std::string> texts, std::span<const IcdCategory> labels,
                                 const TrainingParams& params, std::uint64_t seed);

/// Trains on the corpus' training split only.
ClassifierModel train_classifier(const corpus::LabeledCorpus& corpus, const TrainingParams& params,
                                 std::uint64_t seed);

json model_to_json(const ClassifierModel& model);
ClassifierModel model_from_json(const json& j);

}  // namespace kgsynth::eval
