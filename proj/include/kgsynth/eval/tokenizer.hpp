#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kgsynth/common/io.hpp"

namespace kgsynth::eval {

struct TokenizerConfig {
    bool lowercase = true;
    int ngram_min = 1;
    int ngram_max = 1;

    bool operator==(const TokenizerConfig&) const = default;
};

json to_json(const TokenizerConfig& c);
TokenizerConfig tokenizer_config_from_json(const json& j);

/// Contiguous word n-grams joined by a single space.
std::vector<std::string> ngrams(const std::vector<std::string>& words, int n);

/// Unicode words (punctuation dropped), then every n-gram for n in
/// [ngram_min, ngram_max].
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config = {});

}  // namespace kgsynth::eval
