#pragma once

#include <optional>
#include <string>

#include "kgsynth/common/io.hpp"

namespace kgsynth::gateway {

enum class RecordStatus { Success, Failed };

/// Outcome of one prompt. `response_text` is present iff status is Success.
struct GenerationRecord {
    std::string request_id;
    std::string prompt;
    RecordStatus status = RecordStatus::Failed;
    std::optional<std::string> response_text;
    std::string error_kind;  // "auth", "permanent", "retries_exhausted"
    std::string error;
    std::string backend;
    json params = json::object();
    double latency_ms = 0.0;
    int attempt_count = 0;
    std::string created_at;

    bool ok() const noexcept { return status == RecordStatus::Success; }
};

json to_json(const GenerationRecord& record);
/// Throws ParseError.
GenerationRecord record_from_json(const json& j);

std::string utc_timestamp();

}  // namespace kgsynth::gateway
