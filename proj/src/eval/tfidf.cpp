#include "kgsynth/eval/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "kgsynth/common/error.hpp"

namespace kgsynth::eval {

TfidfVocabulary TfidfVocabulary::fit(std::span<const std::string> documents, const TokenizerConfig& config) {
    std::map<std::string, std::size_t> df;
    for (const auto& doc : documents) {
        const auto tokens = tokenize(doc, config);
        for (const auto& t : std::set<std::string>(tokens.begin(), tokens.end())) ++df[t];
    }
    if (df.empty()) throw DomainError("cannot fit a vocabulary: no tokens in " + std::to_string(documents.size()) + " documents");

    TfidfVocabulary v;
    v.config_ = config;
    v.n_documents_ = documents.size();
    for (auto& [token, count] : df) {
        v.index_.emplace(token, v.tokens_.size());
        v.tokens_.push_back(token);
        v.df_.push_back(count);
    }
    return v;
}

std::optional<std::size_t> TfidfVocabulary::index_of(std::string_view token) const {
    const auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double TfidfVocabulary::idf(std::size_t index) const {
    return std::log((1.0 + static_cast<double>(n_documents_)) / (1.0 + static_cast<double>(df_.at(index)))) + 1.0;
}

SparseVector TfidfVocabulary::transform(std::string_view text) const {
    std::map<std::size_t, double> counts;
    for (const auto& t : tokenize(text, config_))
        if (const auto it = index_.find(t); it != index_.end()) counts[it->second] += 1.0;
    SparseVector out;
    double norm = 0.0;
    for (const auto& [i, c] : counts) {
        const double w = c * idf(i);
        out.emplace_back(i, w);
        norm += w * w;
    }
    if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (auto& [_, w] : out) w /= norm;
    }
    return out;
}

SparseRows TfidfVocabulary::transform(std::span<const std::string> texts) const {
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t r = 0; r < texts.size(); ++r)
        for (const auto& [c, w] : transform(texts[r]))
            triplets.emplace_back(static_cast<int>(r), static_cast<int>(c), w);
    SparseRows m(static_cast<Eigen::Index>(texts.size()), static_cast<Eigen::Index>(size()));
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

json TfidfVocabulary::to_json() const {
    return {{"tokens", tokens_}, {"df", df_}, {"n_documents", n_documents_}, {"tokenizer", eval::to_json(config_)}};
}

TfidfVocabulary TfidfVocabulary::from_json(const json& j) {
    TfidfVocabulary v;
    try {
        v.tokens_ = j.at("tokens").get<std::vector<std::string>>();
        v.df_ = j.at("df").get<std::vector<std::size_t>>();
        v.n_documents_ = j.at("n_documents").get<std::size_t>();
        v.config_ = tokenizer_config_from_json(j.at("tokenizer"));
    } catch (const json::exception& e) {
        throw ParseError(std::string("vocabulary: ") + e.what());
    }
    if (v.tokens_.size() != v.df_.size()) throw ParseError("vocabulary: tokens and df differ in length");
    for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
        if (v.df_[i] == 0) throw ParseError("vocabulary: token '" + v.tokens_[i] + "' has df 0");
        v.index_.emplace(v.tokens_[i], i);
    }
    return v;
}

}  // namespace kgsynth::eval
