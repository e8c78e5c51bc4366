#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace kgsynth {

/// Names of every `{name}` placeholder in a template body.
std::set<std::string> placeholder_names(std::string_view body);

/// Single-pass substitution of `{name}` placeholders. Throws
/// PlaceholderError naming the first placeholder without a value.
std::string fill_placeholders(std::string_view body, const std::map<std::string, std::string>& values);

}  // namespace kgsynth
