#include "kgsynth/eval/ngram.hpp"

#include <set>
#include <string>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/text.hpp"
#include "kgsynth/eval/tokenizer.hpp"

namespace kgsynth::eval {

double ngram_usage_ratio(std::string_view generated, std::string_view example, int n) {
    const auto example_grams = ngrams(text::words(example), n);
    if (example_grams.empty())
        throw DomainError("example too short for " + std::to_string(n) + "-grams");
    const std::set<std::string> reference(example_grams.begin(), example_grams.end());
    const auto generated_grams = ngrams(text::words(generated), n);
    const std::set<std::string> candidate(generated_grams.begin(), generated_grams.end());
    std::size_t shared = 0;
    for (const auto& g : reference) shared += candidate.contains(g);
    return static_cast<double>(shared) / static_cast<double>(reference.size());
}

}  // namespace kgsynth::eval
