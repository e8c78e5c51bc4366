#pragma once

#include <string_view>

namespace kgsynth::eval {

/// |unique n-grams shared by generated and example| / |unique n-grams of
/// example|, over lowercased Unicode words. Always in [0, 1]. Throws
/// DomainError when the example has fewer than n words.
double ngram_usage_ratio(std::string_view generated, std::string_view example, int n);

}  // namespace kgsynth::eval
