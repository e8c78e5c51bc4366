#include "kgsynth/eval/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/rng.hpp"

namespace kgsynth::eval {

json to_json(const TrainingParams& p) {
    return {{"learning_rate", p.learning_rate}, {"l2", p.l2},
            {"max_epochs", p.max_epochs},       {"tolerance", p.tolerance},
            {"init_scale", p.init_scale},       {"tokenizer", to_json(p.tokenizer)}};
}

TrainingParams training_params_from_json(const json& j) {
    TrainingParams p;
    p.learning_rate = j.value("learning_rate", p.learning_rate);
    p.l2 = j.value("l2", p.l2);
    p.max_epochs = j.value("max_epochs", p.max_epochs);
    p.tolerance = j.value("tolerance", p.tolerance);
    p.init_scale = j.value("init_scale", p.init_scale);
    if (j.contains("tokenizer")) p.tokenizer = tokenizer_config_from_json(j["tokenizer"]);
    return p;
}

Eigen::MatrixXd softmax_rows(Eigen::MatrixXd logits) {
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        auto row = logits.row(r);
        row.array() -= row.maxCoeff();
        row = row.array().exp().matrix();
        row /= row.sum();
    }
    return logits;
}

LossAndGradient softmax_loss_and_gradient(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                                          const SparseRows& features, std::span<const int> targets, double l2) {
    const auto n = features.rows();
    if (static_cast<std::size_t>(n) != targets.size()) throw DomainError("features and targets differ in length");
    Eigen::MatrixXd logits = features * weights.transpose();
    logits.rowwise() += bias.transpose();

    // Log-sum-exp per row for a stable loss.
    double loss = 0.0;
    Eigen::MatrixXd probs(logits.rows(), logits.cols());
    for (Eigen::Index r = 0; r < n; ++r) {
        const double m = logits.row(r).maxCoeff();
        const auto shifted = (logits.row(r).array() - m).eval();
        const double lse = std::log(shifted.exp().sum());
        loss -= shifted(targets[static_cast<std::size_t>(r)]) - lse;
        probs.row(r) = (shifted - lse).exp().matrix();
    }
    const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
    loss = loss * inv_n + 0.5 * l2 * weights.squaredNorm();

    for (Eigen::Index r = 0; r < n; ++r) probs(r, targets[static_cast<std::size_t>(r)]) -= 1.0;
    LossAndGradient out;
    out.loss = loss;
    out.grad_weights = (probs.transpose() * features) * inv_n + l2 * weights;
    out.grad_bias = probs.colwise().sum().transpose() * inv_n;
    return out;
}

Eigen::VectorXd ClassifierModel::probabilities(std::string_view text) const {
    Eigen::VectorXd logits = bias;
    for (const auto& [i, w] : vocabulary.transform(text)) logits += w * weights.col(static_cast<Eigen::Index>(i));
    return softmax_rows(logits.transpose()).row(0).transpose();
}

RankedPrediction ClassifierModel::predict(std::string record_id, std::string_view text) const {
    const Eigen::VectorXd p = probabilities(text);
    return rank_scores(std::move(record_id), labels, std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

std::vector<RankedPrediction> ClassifierModel::predict(std::span<const corpus::NoteRecord* const> records) const {
    std::vector<RankedPrediction> out;
    out.reserve(records.size());
    for (const auto* r : records) out.push_back(predict(r->id, r->text));
    return out;
}

ClassifierModel train_classifier(std::span<const std::string> texts, std::span<const IcdCategory> labels,
                                 const TrainingParams& params, std::uint64_t seed) {
    if (texts.size() != labels.size()) throw DomainError("texts and labels differ in length");
    const std::set<IcdCategory> label_set(labels.begin(), labels.end());
    if (label_set.size() < 2)
        throw TrainingError("training data has " + std::to_string(label_set.size()) + " label(s); need at least 2");
    if (!(params.learning_rate > 0.0) || params.l2 < 0.0 || params.max_epochs < 0)
        throw ConfigError("invalid training hyperparameters");

    ClassifierModel model;
    model.seed = seed;
    model.params = params;
    model.labels.assign(label_set.begin(), label_set.end());
    model.vocabulary = TfidfVocabulary::fit(texts, params.tokenizer);

    std::map<IcdCategory, int> index;
    for (std::size_t i = 0; i < model.labels.size(); ++i) index.emplace(model.labels[i], static_cast<int>(i));
    std::vector<int> targets;
    targets.reserve(labels.size());
    for (const auto& l : labels) targets.push_back(index.at(l));
    const SparseRows features = model.vocabulary.transform(texts);

    const auto n_labels = static_cast<Eigen::Index>(model.labels.size());
    const auto n_features = static_cast<Eigen::Index>(model.vocabulary.size());
    Rng rng(seed);
    model.weights.resize(n_labels, n_features);
    for (Eigen::Index c = 0; c < n_features; ++c)
        for (Eigen::Index r = 0; r < n_labels; ++r) model.weights(r, c) = params.init_scale * rng.normal();
    model.bias = Eigen::VectorXd::Zero(n_labels);

    for (int epoch = 0; epoch < params.max_epochs; ++epoch) {
        const auto lg = softmax_loss_and_gradient(model.weights, model.bias, features, targets, params.l2);
        model.loss_history.push_back(lg.loss);
        const double grad_norm = std::sqrt(lg.grad_weights.squaredNorm() + lg.grad_bias.squaredNorm());
        if (grad_norm < params.tolerance) break;
        model.weights -= params.learning_rate * lg.grad_weights;
        model.bias -= params.learning_rate * lg.grad_bias;
        model.epochs_run = epoch + 1;
    }
    return model;
}

ClassifierModel train_classifier(const corpus::LabeledCorpus& corpus, const TrainingParams& params,
                                 std::uint64_t seed) {
    std::vector<std::string> texts;
    std::vector<IcdCategory> labels;
    for (const auto* r : corpus.in_split(corpus::Split::Train)) {
        texts.push_back(r->text);
        labels.push_back(r->code);
    }
    return train_classifier(texts, labels, params, seed);
}

json model_to_json(const ClassifierModel& m) {
    json labels = json::array();
    for (const auto& l : m.labels) labels.push_back(l.code());
    json weights = json::array();
    for (Eigen::Index r = 0; r < m.weights.rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(m.weights.cols()));
        for (Eigen::Index c = 0; c < m.weights.cols(); ++c) row[static_cast<std::size_t>(c)] = m.weights(r, c);
        weights.push_back(std::move(row));
    }
    return {{"labels", std::move(labels)},
            {"vocabulary", m.vocabulary.to_json()},
            {"weights", std::move(weights)},
            {"bias", std::vector<double>(m.bias.data(), m.bias.data() + m.bias.size())},
            {"seed", m.seed},
            {"params", to_json(m.params)},
            {"epochs_run", m.epochs_run},
            {"loss_history", m.loss_history}};
}

ClassifierModel model_from_json(const json& j) {
    try {
        ClassifierModel m;
        for (const auto& l : j.at("labels")) m.labels.push_back(IcdCategory::parse(l.get<std::string>()));
        m.vocabulary = TfidfVocabulary::from_json(j.at("vocabulary"));
        const auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
        const auto bias = j.at("bias").get<std::vector<double>>();
        if (rows.size() != m.labels.size() || bias.size() != m.labels.size())
            throw ParseError("model: weight rows do not match labels");
        if (!std::is_sorted(m.labels.begin(), m.labels.end()) ||
            std::adjacent_find(m.labels.begin(), m.labels.end()) != m.labels.end())
            throw ParseError("model: labels must be sorted and unique");
        m.weights.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.vocabulary.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != m.vocabulary.size()) throw ParseError("model: weight row does not match vocabulary");
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                m.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
        m.bias = Eigen::Map<const Eigen::VectorXd>(bias.data(), static_cast<Eigen::Index>(bias.size()));
        m.seed = j.at("seed").get<std::uint64_t>();
        m.params = training_params_from_json(j.at("params"));
        m.epochs_run = j.value("epochs_run", 0);
        m.loss_history = j.value("loss_history", std::vector<double>{});
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("model: ") + e.what());
    }
}

}  // namespace kgsynth::eval
