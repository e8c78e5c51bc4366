#include "kgsynth/eval/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/rng.hpp"
#include "kgsynth/common/text.hpp"

namespace kgsynth::eval {
namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double mean_best(const Embeddings& from, const Embeddings& to) {
    double total = 0.0;
    for (const auto& u : from) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& v : to) best = std::max(best, cosine(u, v));
        total += best;
    }
    return total / static_cast<double>(from.size());
}

Embeddings checked_embed(EmbeddingProvider& provider, const std::vector<std::string>& tokens) {
    Embeddings out;
    try {
        out = provider.embed(tokens);
    } catch (const ProviderError&) {
        throw;
    } catch (const std::exception& e) {
        throw ProviderError(std::string("embedding provider failed: ") + e.what());
    }
    if (out.size() != tokens.size())
        throw ProviderError("embedding provider returned " + std::to_string(out.size()) + " vectors for " +
                            std::to_string(tokens.size()) + " tokens");
    return out;
}

}  // namespace

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
    if (dimension == 0) throw ConfigError("embedding dimension must be positive");
}

Embeddings HashEmbeddingProvider::embed(const std::vector<std::string>& tokens) {
    Embeddings out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        Rng rng(derive_seed(seed_, t));
        std::vector<double> v(dimension_);
        double norm = 0.0;
        for (auto& x : v) {
            x = rng.normal();
            norm += x * x;
        }
        norm = std::sqrt(norm);
        for (auto& x : v) x /= norm;
        out.push_back(std::move(v));
    }
    return out;
}

SimilarityScores greedy_match(const Embeddings& candidate, const Embeddings& reference) {
    if (candidate.empty() || reference.empty()) throw DomainError("similarity needs non-empty token sequences");
    const auto dim = candidate.front().size();
    for (const auto* set : {&candidate, &reference})
        for (const auto& v : *set)
            if (v.size() != dim) throw DomainError("embedding dimensions differ");
    SimilarityScores s;
    s.precision = mean_best(candidate, reference);
    s.recall = mean_best(reference, candidate);
    const double denom = s.precision + s.recall;
    s.f1 = denom == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / denom;
    return s;
}

SimilarityScores embedding_similarity(std::string_view candidate, std::string_view reference,
                                      EmbeddingProvider& provider) {
    const auto cand_tokens = text::words(candidate);
    const auto ref_tokens = text::words(reference);
    if (cand_tokens.empty() || ref_tokens.empty()) throw DomainError("similarity needs non-empty token sequences");
    return greedy_match(checked_embed(provider, cand_tokens), checked_embed(provider, ref_tokens));
}

}  // namespace kgsynth::eval
