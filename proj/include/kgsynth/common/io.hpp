#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace kgsynth {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string read_text(const fs::path& path);
json read_json(const fs::path& path);

/// One JSON value per non-blank line. Throws ParseError with the line number.
std::vector<json> read_jsonl(const fs::path& path);

/// Write to a sibling temp file, then rename over the target.
void write_text_atomic(const fs::path& path, std::string_view content);
void write_jsonl_atomic(const fs::path& path, const std::vector<json>& rows);
void write_json_atomic(const fs::path& path, const json& value);

/// Canonical single-line serialization (sorted keys, no spaces).
std::string canonical_dump(const json& value);

}  // namespace kgsynth
