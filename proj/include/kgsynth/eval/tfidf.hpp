#pragma once

#include <Eigen/SparseCore>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgsynth/eval/tokenizer.hpp"

namespace kgsynth::eval {

using SparseVector = std::vector<std::pair<std::size_t, double>>;  // (index, value), index ascending
using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Vocabulary and document frequencies fitted on training texts only.
/// idf(t) = ln((1 + N) / (1 + df(t))) + 1; transformed vectors use raw term
/// counts times idf, L2-normalized.
class TfidfVocabulary {
public:
    TfidfVocabulary() = default;

    /// Throws DomainError when no document yields a token.
    static TfidfVocabulary fit(std::span<const std::string> documents, const TokenizerConfig& config = {});

    std::size_t size() const noexcept { return tokens_.size(); }
    std::size_t n_documents() const noexcept { return n_documents_; }
    const TokenizerConfig& config() const noexcept { return config_; }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }

    std::optional<std::size_t> index_of(std::string_view token) const;
    std::size_t document_frequency(std::size_t index) const { return df_.at(index); }
    double idf(std::size_t index) const;

    /// Unknown tokens are ignored; a text with no known token maps to the
    /// zero vector.
    SparseVector transform(std::string_view text) const;
    SparseRows transform(std::span<const std::string> texts) const;

    json to_json() const;
    static TfidfVocabulary from_json(const json& j);

private:
    std::vector<std::string> tokens_;  // sorted; index = position
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::size_t> df_;
    std::size_t n_documents_ = 0;
    TokenizerConfig config_;
};

}  // namespace kgsynth::eval
