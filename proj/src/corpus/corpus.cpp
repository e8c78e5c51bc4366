#include "kgsynth/corpus/corpus.hpp"

#include <fstream>
#include <sstream>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/log.hpp"
#include "kgsynth/common/text.hpp"

namespace kgsynth::corpus {
namespace {

std::vector<NoteRecord> apply_splits(std::vector<NoteRecord> records, const SplitSpec& spec,
                                     const std::vector<bool>& has_embedded) {
    if (spec.id_lists.empty()) {
        for (std::size_t i = 0; i < records.size(); ++i)
            if (!has_embedded[i]) throw ParseError("record " + records[i].id + " has no split and no id lists were given");
        return records;
    }
    std::map<std::string, Split> owner;
    for (const auto& [split, ids] : spec.id_lists)
        for (const auto& id : ids)
            if (auto [it, fresh] = owner.emplace(id, split); !fresh && it->second != split)
                throw SplitError("id " + id + " is listed in both " + std::string(to_string(it->second)) + " and " +
                                 std::string(to_string(split)));
    std::vector<NoteRecord> kept;
    std::size_t dropped = 0;
    for (auto& r : records) {
        const auto it = owner.find(r.id);
        if (it == owner.end()) {
            ++dropped;
            continue;
        }
        r.split = it->second;
        kept.push_back(std::move(r));
    }
    if (dropped) log::warn("records not in any split list were dropped", {{"count", dropped}});
    return kept;
}

LabeledCorpus finish(std::vector<NoteRecord> records, const fs::path& path) {
    LabeledCorpus corpus(std::move(records));
    const auto sizes = split_sizes(corpus);
    for (auto split : {Split::Train, Split::Valid, Split::Test})
        if (corpus.count(split) == 0)
            log::warn("empty split", {{"path", path.string()}, {"split", to_string(split)}});
    log::info("loaded corpus", {{"path", path.string()}, {"sizes", sizes}});
    return corpus;
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delimiter)) out.push_back(field);
    if (!line.empty() && line.back() == delimiter) out.emplace_back();
    return out;
}

}  // namespace

std::string_view to_string(Split split) noexcept {
    switch (split) {
        case Split::Train: return "train";
        case Split::Valid: return "valid";
        case Split::Test: return "test";
    }
    return "?";
}

std::string_view to_string(Origin origin) noexcept { return origin == Origin::Real ? "real" : "synthetic"; }

Split split_from_string(std::string_view s) {
    if (s == "train") return Split::Train;
    if (s == "valid" || s == "dev") return Split::Valid;
    if (s == "test") return Split::Test;
    throw ParseError("unknown split '" + std::string(s) + "'");
}

Origin origin_from_string(std::string_view s) {
    if (s == "real") return Origin::Real;
    if (s == "synthetic") return Origin::Synthetic;
    throw ParseError("unknown origin '" + std::string(s) + "'");
}

LabeledCorpus::LabeledCorpus(std::vector<NoteRecord> records) : records_(std::move(records)) {
    std::set<std::string> ids;
    for (const auto& r : records_) {
        if (r.id.empty()) throw IntegrityError("record with empty id");
        if (!ids.insert(r.id).second) throw IntegrityError("duplicate record id " + r.id);
        if (text::trim(r.text).empty()) throw IntegrityError("record " + r.id + " has empty text");
        if (r.origin == Origin::Synthetic && (!r.meta.contains("backend") || !r.meta.contains("task_ref")))
            throw IntegrityError("synthetic record " + r.id + " lacks backend/task_ref provenance");
        labels_.insert(r.code);
    }
}

std::vector<const NoteRecord*> LabeledCorpus::in_split(Split split) const {
    std::vector<const NoteRecord*> out;
    for (const auto& r : records_)
        if (r.split == split) out.push_back(&r);
    return out;
}

std::size_t LabeledCorpus::count(Split split) const {
    std::size_t n = 0;
    for (const auto& r : records_) n += r.split == split;
    return n;
}

json record_to_json(const NoteRecord& r) {
    return {{"id", r.id},
            {"text", r.text},
            {"code", r.code.code()},
            {"split", to_string(r.split)},
            {"origin", to_string(r.origin)},
            {"meta", r.meta}};
}

NoteRecord record_from_json(const json& j) {
    try {
        NoteRecord r{j.at("id").is_string() ? j["id"].get<std::string>() : j["id"].dump(),
                     j.at("text").get<std::string>(),
                     truncate_to_category(j.at("code").get<std::string>()),
                     Split::Train,
                     Origin::Real,
                     json::object()};
        if (j.contains("split")) r.split = split_from_string(j["split"].get<std::string>());
        if (j.contains("origin")) r.origin = origin_from_string(j["origin"].get<std::string>());
        if (j.contains("meta") && j["meta"].is_object()) r.meta = j["meta"];
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("corpus record: ") + e.what());
    }
}

SplitSpec SplitSpec::from_files(const fs::path& train, const fs::path& valid, const fs::path& test) {
    SplitSpec spec;
    const auto read_ids = [](const fs::path& p) {
        std::set<std::string> ids;
        std::istringstream in(read_text(p));
        std::string line;
        while (std::getline(in, line))
            if (auto id = text::trim(line); !id.empty()) ids.emplace(id);
        return ids;
    };
    spec.id_lists[Split::Train] = read_ids(train);
    spec.id_lists[Split::Valid] = read_ids(valid);
    spec.id_lists[Split::Test] = read_ids(test);
    return spec;
}

LabeledCorpus load_corpus(const fs::path& path, const SplitSpec& splits) {
    std::vector<NoteRecord> records;
    std::vector<bool> embedded;
    std::size_t i = 0;
    for (const auto& row : read_jsonl(path)) {
        ++i;
        try {
            records.push_back(record_from_json(row));
        } catch (const ParseError& e) {
            throw ParseError(path.string() + " record " + std::to_string(i) + ": " + e.what());
        }
        embedded.push_back(row.contains("split"));
    }
    return finish(apply_splits(std::move(records), splits, embedded), path);
}

LabeledCorpus import_tsv(const fs::path& path, const TsvImport& columns, const SplitSpec& splits) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": missing header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_line(line, columns.delimiter);
    const auto column = [&](const std::string& name, bool required) -> std::optional<std::size_t> {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return c;
        if (required) throw ParseError(path.string() + ": no column named '" + name + "'");
        return std::nullopt;
    };
    const auto id_col = *column(columns.id_column, true);
    const auto text_col = *column(columns.text_column, true);
    const auto code_col = *column(columns.code_column, true);
    const auto split_col = column(columns.split_column, splits.id_lists.empty());

    std::vector<NoteRecord> records;
    std::vector<bool> embedded;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        const auto fields = split_line(line, columns.delimiter);
        const auto where = path.string() + ":" + std::to_string(lineno);
        const auto need = std::max({id_col, text_col, code_col, split_col.value_or(0)});
        if (fields.size() <= need) throw ParseError(where + ": expected " + std::to_string(need + 1) + " columns");
        NoteRecord r{fields[id_col], fields[text_col], truncate_to_category(text::trim(fields[code_col])),
                     Split::Train, Origin::Real, json::object()};
        if (split_col) r.split = split_from_string(text::trim(fields[*split_col]));
        for (std::size_t c = 0; c < header.size() && c < fields.size(); ++c)
            if (header[c] == "age" || header[c] == "sex") r.meta[header[c]] = fields[c];
        records.push_back(std::move(r));
        embedded.push_back(split_col.has_value());
    }
    return finish(apply_splits(std::move(records), splits, embedded), path);
}

void save_records(const std::vector<NoteRecord>& records, const fs::path& path) {
    std::vector<json> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back(record_to_json(r));
    write_jsonl_atomic(path, rows);
}

void save_corpus(const LabeledCorpus& corpus, const fs::path& path) { save_records(corpus.records(), path); }

std::vector<NoteRecord> load_records(const fs::path& path) {
    std::vector<NoteRecord> out;
    for (const auto& row : read_jsonl(path)) out.push_back(record_from_json(row));
    return out;
}

json split_sizes(const LabeledCorpus& corpus) {
    return {{"train", corpus.count(Split::Train)},
            {"valid", corpus.count(Split::Valid)},
            {"test", corpus.count(Split::Test)}};
}

}  // namespace kgsynth::corpus
