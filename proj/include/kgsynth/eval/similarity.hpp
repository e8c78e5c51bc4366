#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kgsynth::eval {

using Embeddings = std::vector<std::vector<double>>;

/// Contextual token embeddings: one fixed-dimension vector per input token.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual Embeddings embed(const std::vector<std::string>& tokens) = 0;
};

/// Offline provider: each token maps to a pseudo-random unit vector seeded by
/// its hash. Identical tokens get identical vectors.
class HashEmbeddingProvider : public EmbeddingProvider {
public:
    explicit HashEmbeddingProvider(std::size_t dimension = 64, std::uint64_t seed = 0);
    Embeddings embed(const std::vector<std::string>& tokens) override;

private:
    std::size_t dimension_;
    std::uint64_t seed_;
};

/// JSON over HTTP: POST {"tokens": [...]} and expect {"vectors": [[...], ...]}.
class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    explicit HttpEmbeddingProvider(std::string endpoint, int timeout_ms = 30'000);
    Embeddings embed(const std::vector<std::string>& tokens) override;

private:
    std::string origin_;
    std::string path_;
    int timeout_ms_;
};

struct SimilarityScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Greedy matching on cosine similarity: precision averages, over candidate
/// tokens, the best cosine against any reference token; recall the reverse;
/// f1 is their harmonic mean (0 when both are 0). No idf weighting and no
/// baseline rescaling. Throws DomainError for empty inputs or dimension
/// mismatches.
SimilarityScores greedy_match(const Embeddings& candidate, const Embeddings& reference);

/// Tokenizes both texts into lowercased words, embeds them, and greedy-matches.
/// Throws ProviderError when the provider fails or returns the wrong shape.
SimilarityScores embedding_similarity(std::string_view candidate, std::string_view reference,
                                      EmbeddingProvider& provider);

}  // namespace kgsynth::eval
