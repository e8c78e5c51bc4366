#include "kgsynth/eval/tokenizer.hpp"

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/text.hpp"

namespace kgsynth::eval {

json to_json(const TokenizerConfig& c) {
    return {{"lowercase", c.lowercase}, {"ngram_min", c.ngram_min}, {"ngram_max", c.ngram_max}};
}

TokenizerConfig tokenizer_config_from_json(const json& j) {
    TokenizerConfig c;
    c.lowercase = j.value("lowercase", c.lowercase);
    c.ngram_min = j.value("ngram_min", c.ngram_min);
    c.ngram_max = j.value("ngram_max", c.ngram_max);
    return c;
}

std::vector<std::string> ngrams(const std::vector<std::string>& words, int n) {
    if (n < 1) throw DomainError("n-gram order must be >= 1");
    std::vector<std::string> out;
    const auto order = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + order <= words.size(); ++i) {
        std::string gram = words[i];
        for (std::size_t k = 1; k < order; ++k) gram += ' ' + words[i + k];
        out.push_back(std::move(gram));
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
    if (config.ngram_min < 1 || config.ngram_max < config.ngram_min)
        throw ConfigError("n-gram range must satisfy 1 <= min <= max");
    const auto words = text::words(text, config.lowercase);
    if (config.ngram_min == 1 && config.ngram_max == 1) return words;
    std::vector<std::string> out;
    for (int n = config.ngram_min; n <= config.ngram_max; ++n) {
        auto grams = ngrams(words, n);
        out.insert(out.end(), std::make_move_iterator(grams.begin()), std::make_move_iterator(grams.end()));
    }
    return out;
}

}  // namespace kgsynth::eval
