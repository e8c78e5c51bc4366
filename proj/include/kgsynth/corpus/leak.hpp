#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kgsynth::corpus {

struct LeakMatch {
    std::size_t offset = 0;  // byte offset
    std::string text;
};

/// ICD-like substrings: an uppercase Latin letter, two digits, and an
/// optional '.' with one or two digits, with no letter or digit (in any
/// script) directly on either side. Lab names such as "B12" match too; they
/// are reported for review, not filtered out.
std::vector<LeakMatch> leak_matches(std::string_view text);

/// Matched substrings only; empty means clean.
std::vector<std::string> leak_scan(std::string_view text);

/// Replaces every match with `mask`.
std::string redact_codes(std::string_view text, std::string_view mask = "[code]");

}  // namespace kgsynth::corpus
