#include "kgsynth/corpus/synthetic.hpp"

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/text.hpp"
#include "kgsynth/corpus/leak.hpp"

namespace kgsynth::corpus {

IngestResult ingest_synthetic(const std::vector<gateway::GenerationRecord>& records,
                              const std::map<std::string, taskgen::GenerationTaskEntry>& tasks_by_request) {
    IngestResult result;
    for (const auto& g : records) {
        const auto task = tasks_by_request.find(g.request_id);
        if (task == tasks_by_request.end())
            throw IntegrityError("generation " + g.request_id + " does not map to any task entry");
        if (!g.ok() || text::trim(*g.response_text).empty()) {
            ++result.skipped_failed;
            continue;
        }
        const auto& entry = task->second;
        const auto matches = leak_scan(*g.response_text);
        json meta{{"backend", g.backend},
                  {"task_ref", entry.key()},
                  {"request_id", g.request_id},
                  {"prompt_kind", taskgen::to_string(entry.kind)},
                  {"symptoms", entry.symptoms},
                  {"seed", entry.seed},
                  {"leak", !matches.empty()},
                  {"leak_matches", matches}};
        if (entry.example) meta["example"] = *entry.example;
        result.leak_flagged += !matches.empty();
        result.notes.push_back({"syn-" + entry.key(), *g.response_text, entry.code, Split::Train, Origin::Synthetic,
                                std::move(meta)});
    }
    return result;
}

}  // namespace kgsynth::corpus
