#include "kgsynth/corpus/leak.hpp"

#include <unicode/utf8.h>

#include "kgsynth/common/text.hpp"

namespace kgsynth::corpus {
namespace {

bool ascii_digit(char c) { return c >= '0' && c <= '9'; }

// Code point ending just before byte `pos`.
char32_t before(std::string_view s, std::size_t pos) {
    if (pos == 0) return 0;
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
    auto i = static_cast<std::int32_t>(pos);
    UChar32 c;
    U8_PREV(bytes, 0, i, c);
    return c < 0 ? 0 : static_cast<char32_t>(c);
}

char32_t at(std::string_view s, std::size_t pos) {
    if (pos >= s.size()) return 0;
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
    auto i = static_cast<std::int32_t>(pos);
    UChar32 c;
    U8_NEXT(bytes, i, static_cast<std::int32_t>(s.size()), c);
    return c < 0 ? 0 : static_cast<char32_t>(c);
}

bool word_char(char32_t c) { return c != 0 && text::is_alnum(c); }

}  // namespace

std::vector<LeakMatch> leak_matches(std::string_view s) {
    std::vector<LeakMatch> out;
    for (std::size_t i = 0; i + 3 <= s.size(); ++i) {
        if (!(s[i] >= 'A' && s[i] <= 'Z') || !ascii_digit(s[i + 1]) || !ascii_digit(s[i + 2])) continue;
        if (word_char(before(s, i))) continue;
        std::size_t end = i + 3;
        // Prefer the longest suffix that still ends on a boundary.
        std::size_t best = 0;
        if (end + 1 < s.size() && s[end] == '.' && ascii_digit(s[end + 1])) {
            std::size_t e = end + 2;
            if (e < s.size() && ascii_digit(s[e])) ++e;
            if (!word_char(at(s, e))) best = e;
        }
        if (!best && !word_char(at(s, end))) best = end;
        if (!best) continue;
        out.push_back({i, std::string(s.substr(i, best - i))});
        i = best - 1;
    }
    return out;
}

std::vector<std::string> leak_scan(std::string_view text) {
    std::vector<std::string> out;
    for (auto& m : leak_matches(text)) out.push_back(std::move(m.text));
    return out;
}

std::string redact_codes(std::string_view text, std::string_view mask) {
    std::string out;
    std::size_t pos = 0;
    for (const auto& m : leak_matches(text)) {
        out.append(text.substr(pos, m.offset - pos));
        out.append(mask);
        pos = m.offset + m.text.size();
    }
    out.append(text.substr(pos));
    return out;
}

}  // namespace kgsynth::corpus
