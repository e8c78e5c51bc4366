#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace kgsynth::text {

/// Unicode full case folding of UTF-8 text.
std::string casefold(std::string_view utf8);

/// Unicode lowercase of UTF-8 text.
std::string to_lower(std::string_view utf8);

std::string_view trim(std::string_view s) noexcept;

std::string join(const std::vector<std::string>& parts, std::string_view separator);

/// Number of code points in a UTF-8 string.
std::size_t codepoint_count(std::string_view utf8);

/// True for letters and digits in any script.
bool is_alnum(char32_t cp) noexcept;

/// Maximal runs of letters/digits, optionally lowercased. Punctuation and
/// whitespace separate words and are dropped.
std::vector<std::string> words(std::string_view utf8, bool lowercase = true);

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;  // one past the last byte
};

struct SentenceOptions {
    /// Lowercased words that end in a period without ending a sentence.
    std::set<std::string> abbreviations = default_abbreviations();

    static std::set<std::string> default_abbreviations();
};

/// Sentence byte spans. A boundary is a run of '.', '!' or '?' followed by
/// whitespace and then an uppercase letter or a digit, unless the word before
/// the period is a known abbreviation. Whitespace between sentences belongs to
/// no span.
std::vector<Span> sentence_spans(std::string_view utf8, const SentenceOptions& options = {});

}  // namespace kgsynth::text
