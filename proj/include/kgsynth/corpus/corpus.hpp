#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgsynth/common/icd.hpp"
#include "kgsynth/common/io.hpp"

namespace kgsynth::corpus {

enum class Split { Train, Valid, Test };
enum class Origin { Real, Synthetic };

std::string_view to_string(Split split) noexcept;
std::string_view to_string(Origin origin) noexcept;
Split split_from_string(std::string_view s);
Origin origin_from_string(std::string_view s);

struct NoteRecord {
    std::string id;
    std::string text;
    IcdCategory code;
    Split split = Split::Train;
    Origin origin = Origin::Real;
    /// Optional fields: age, sex; for synthetic records backend and task_ref.
    json meta = json::object();

    bool operator==(const NoteRecord&) const = default;
};

/// A set of labeled notes with a train/valid/test partition. Every record
/// sits in exactly one split, so the partition is disjoint and exhaustive by
/// construction.
class LabeledCorpus {
public:
    LabeledCorpus() = default;
    /// Throws IntegrityError on an empty text, a duplicate id, or a synthetic
    /// record without backend/task_ref provenance.
    explicit LabeledCorpus(std::vector<NoteRecord> records);

    const std::vector<NoteRecord>& records() const noexcept { return records_; }
    const std::set<IcdCategory>& label_set() const noexcept { return labels_; }

    std::vector<const NoteRecord*> in_split(Split split) const;
    std::size_t count(Split split) const;
    bool empty() const noexcept { return records_.empty(); }

private:
    std::vector<NoteRecord> records_;
    std::set<IcdCategory> labels_;
};

json record_to_json(const NoteRecord& record);
/// Codes are truncated to category level on the way in. Throws ParseError.
NoteRecord record_from_json(const json& j);

/// Where split membership comes from.
struct SplitSpec {
    /// When empty, each record's own "split" field is used. Otherwise a record
    /// belongs to the list holding its id; records in no list are dropped.
    std::map<Split, std::set<std::string>> id_lists;

    static SplitSpec embedded() { return {}; }
    /// Reads one id per line from each file.
    static SplitSpec from_files(const fs::path& train, const fs::path& valid, const fs::path& test);
};

/// Column names for a tab-separated source.
struct TsvImport {
    std::string id_column = "id";
    std::string text_column = "text";
    std::string code_column = "code";
    std::string split_column = "split";
    char delimiter = '\t';
};

/// JSON-lines corpus. Throws ParseError, MalformedCodeError, or SplitError for
/// ids listed in more than one split. Empty splits are logged, not fatal.
LabeledCorpus load_corpus(const fs::path& path, const SplitSpec& splits = SplitSpec::embedded());

/// Tab-separated corpus with a header row.
LabeledCorpus import_tsv(const fs::path& path, const TsvImport& columns = {},
                         const SplitSpec& splits = SplitSpec::embedded());

/// One record per line with sorted keys, in corpus order.
void save_corpus(const LabeledCorpus& corpus, const fs::path& path);
void save_records(const std::vector<NoteRecord>& records, const fs::path& path);
std::vector<NoteRecord> load_records(const fs::path& path);

json split_sizes(const LabeledCorpus& corpus);

}  // namespace kgsynth::corpus
