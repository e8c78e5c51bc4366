#pragma once

#include <map>
#include <string>
#include <vector>

#include "kgsynth/corpus/corpus.hpp"
#include "kgsynth/gateway/record.hpp"
#include "kgsynth/taskgen/task.hpp"

namespace kgsynth::corpus {

struct IngestResult {
    std::vector<NoteRecord> notes;
    std::size_t skipped_failed = 0;
    std::size_t leak_flagged = 0;
};

/// Turns successful generations into synthetic training records. Every
/// request id must map to a task entry; IntegrityError names the first one
/// that does not. Failed generations are counted and skipped. Leaks are
/// flagged in meta ("leak", "leak_matches"), never dropped.
IngestResult ingest_synthetic(const std::vector<gateway::GenerationRecord>& records,
                              const std::map<std::string, taskgen::GenerationTaskEntry>& tasks_by_request);

}  // namespace kgsynth::corpus
