#include "kgsynth/common/placeholders.hpp"

#include "kgsynth/common/error.hpp"

namespace kgsynth {
namespace {

bool name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

// Length of a `{name}` token starting at `pos`, or 0.
std::size_t token_length(std::string_view s, std::size_t pos) {
    if (s[pos] != '{') return 0;
    std::size_t j = pos + 1;
    while (j < s.size() && name_char(s[j])) ++j;
    if (j == pos + 1 || j >= s.size() || s[j] != '}') return 0;
    return j - pos + 1;
}

}  // namespace

std::set<std::string> placeholder_names(std::string_view body) {
    std::set<std::string> names;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (const auto len = token_length(body, i)) {
            names.emplace(body.substr(i + 1, len - 2));
            i += len - 1;
        }
    }
    return names;
}

std::string fill_placeholders(std::string_view body, const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(body.size());
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (const auto len = token_length(body, i)) {
            const std::string name(body.substr(i + 1, len - 2));
            const auto it = values.find(name);
            if (it == values.end()) throw PlaceholderError("no value for placeholder {" + name + "}");
            out += it->second;
            i += len - 1;
        } else {
            out += body[i];
        }
    }
    return out;
}

}  // namespace kgsynth
