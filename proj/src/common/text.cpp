#include "kgsynth/common/text.hpp"

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace kgsynth::text {
namespace {

struct Decoded {
    char32_t cp;
    std::size_t begin;
    std::size_t end;
};

std::vector<Decoded> decode(std::string_view s) {
    std::vector<Decoded> out;
    out.reserve(s.size());
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
    const auto length = static_cast<std::int32_t>(s.size());
    std::int32_t i = 0;
    while (i < length) {
        const std::int32_t start = i;
        UChar32 c;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) c = 0xFFFD;
        out.push_back({static_cast<char32_t>(c), static_cast<std::size_t>(start),
                       static_cast<std::size_t>(i)});
    }
    return out;
}

bool is_space(char32_t cp) noexcept { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

bool is_terminator(char32_t cp) noexcept { return cp == U'.' || cp == U'!' || cp == U'?'; }

bool is_closer(char32_t cp) noexcept {
    return cp == U')' || cp == U']' || cp == U'"' || cp == U'\'' || cp == U'»' ||
           cp == U'”' || cp == U'’';
}

}  // namespace

std::string casefold(std::string_view utf8) {
    std::string out;
    icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<std::int32_t>(utf8.size())))
        .foldCase()
        .toUTF8String(out);
    return out;
}

std::string to_lower(std::string_view utf8) {
    std::string out;
    icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<std::int32_t>(utf8.size())))
        .toLower(icu::Locale::getRoot())
        .toUTF8String(out);
    return out;
}

std::string_view trim(std::string_view s) noexcept {
    const auto ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::string join(const std::vector<std::string>& parts, std::string_view separator) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += separator;
        out += parts[i];
    }
    return out;
}

std::size_t codepoint_count(std::string_view utf8) {
    std::size_t n = 0;
    for (unsigned char c : utf8)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

bool is_alnum(char32_t cp) noexcept { return u_isalnum(static_cast<UChar32>(cp)); }

std::vector<std::string> words(std::string_view utf8, bool lowercase) {
    std::vector<std::string> out;
    const auto cps = decode(utf8);
    std::size_t i = 0;
    while (i < cps.size()) {
        if (!is_alnum(cps[i].cp)) {
            ++i;
            continue;
        }
        const std::size_t start = cps[i].begin;
        while (i < cps.size() && is_alnum(cps[i].cp)) ++i;
        const auto word = utf8.substr(start, cps[i - 1].end - start);
        out.push_back(lowercase ? to_lower(word) : std::string(word));
    }
    return out;
}

std::set<std::string> SentenceOptions::default_abbreviations() {
    return {// English
            "dr", "mr", "mrs", "ms", "vs", "etc", "e.g", "i.e", "approx", "no", "fig",
            // Russian clinical shorthand
            "т", "е", "д", "г", "гг", "др", "пр", "см", "стр", "мг", "мл", "ед", "лет", "т.е",
            "т.д", "т.п", "в/в", "в/м", "р-р", "табл", "тыс", "млн", "мин", "сут"};
}

std::vector<Span> sentence_spans(std::string_view utf8, const SentenceOptions& options) {
    std::vector<Span> spans;
    const auto cps = decode(utf8);
    std::size_t i = 0;
    while (i < cps.size() && is_space(cps[i].cp)) ++i;
    if (i == cps.size()) return spans;
    std::size_t start = i;

    while (i < cps.size()) {
        if (!is_terminator(cps[i].cp)) {
            ++i;
            continue;
        }
        const std::size_t term_begin = i;
        while (i < cps.size() && is_terminator(cps[i].cp)) ++i;
        while (i < cps.size() && is_closer(cps[i].cp)) ++i;
        const std::size_t sentence_end = i;  // index one past the last cp of the sentence
        std::size_t j = i;
        while (j < cps.size() && is_space(cps[j].cp)) ++j;
        if (j == i || j == cps.size()) continue;
        const auto next = static_cast<UChar32>(cps[j].cp);
        if (!u_isupper(next) && !u_isdigit(next)) continue;

        if (cps[term_begin].cp == U'.') {
            // Word ending at the period, including inner dots ("т.е", "e.g").
            std::size_t w = term_begin;
            while (w > start && (is_alnum(cps[w - 1].cp) || cps[w - 1].cp == U'.' || cps[w - 1].cp == U'/' ||
                                 cps[w - 1].cp == U'-'))
                --w;
            if (w < term_begin) {
                const auto word = to_lower(
                    utf8.substr(cps[w].begin, cps[term_begin - 1].end - cps[w].begin));
                if (options.abbreviations.contains(word)) continue;
            }
        }
        spans.push_back({cps[start].begin, cps[sentence_end - 1].end});
        start = j;
        i = j;
    }
    std::size_t last = cps.size();
    while (last > start && is_space(cps[last - 1].cp)) --last;
    if (last > start) spans.push_back({cps[start].begin, cps[last - 1].end});
    return spans;
}

}  // namespace kgsynth::text
