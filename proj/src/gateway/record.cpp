#include "kgsynth/gateway/record.hpp"

#include <chrono>
#include <ctime>

#include "kgsynth/common/error.hpp"

namespace kgsynth::gateway {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[40];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

json to_json(const GenerationRecord& r) {
    json j{{"request_id", r.request_id},
           {"prompt", r.prompt},
           {"status", r.ok() ? "success" : "failed"},
           {"backend", r.backend},
           {"params", r.params},
           {"latency_ms", r.latency_ms},
           {"attempt_count", r.attempt_count},
           {"created_at", r.created_at}};
    if (r.response_text) j["response_text"] = *r.response_text;
    if (!r.ok()) {
        j["error_kind"] = r.error_kind;
        j["error"] = r.error;
    }
    return j;
}

GenerationRecord record_from_json(const json& j) {
    try {
        GenerationRecord r;
        r.request_id = j.at("request_id").get<std::string>();
        r.prompt = j.at("prompt").get<std::string>();
        const auto status = j.at("status").get<std::string>();
        if (status != "success" && status != "failed") throw ParseError("bad record status '" + status + "'");
        r.status = status == "success" ? RecordStatus::Success : RecordStatus::Failed;
        if (j.contains("response_text")) r.response_text = j["response_text"].get<std::string>();
        if (r.ok() != r.response_text.has_value())
            throw ParseError("record " + r.request_id + ": response_text must be present iff status is success");
        r.error_kind = j.value("error_kind", std::string{});
        r.error = j.value("error", std::string{});
        r.backend = j.value("backend", std::string{});
        r.params = j.value("params", json::object());
        r.latency_ms = j.value("latency_ms", 0.0);
        r.attempt_count = j.value("attempt_count", 0);
        r.created_at = j.value("created_at", std::string{});
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("generation record: ") + e.what());
    }
}

}  // namespace kgsynth::gateway
