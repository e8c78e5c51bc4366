#include "kgsynth/common/io.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include "kgsynth/common/error.hpp"

namespace kgsynth {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<json> read_jsonl(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<json> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            rows.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

void write_text_atomic(const fs::path& path, std::string_view content) {
    static std::atomic<unsigned> counter{0};
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string canonical_dump(const json& value) {
    return value.dump(-1, ' ', false, json::error_handler_t::strict);
}

void write_jsonl_atomic(const fs::path& path, const std::vector<json>& rows) {
    std::string content;
    for (const auto& row : rows) {
        content += canonical_dump(row);
        content += '\n';
    }
    write_text_atomic(path, content);
}

void write_json_atomic(const fs::path& path, const json& value) {
    write_text_atomic(path, value.dump(2) + "\n");
}

}  // namespace kgsynth
