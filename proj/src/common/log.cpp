#include "kgsynth/common/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "kgsynth/common/error.hpp"

namespace kgsynth::log {
namespace {

std::shared_ptr<spdlog::logger> logger() {
    static auto instance = [] {
        auto l = std::make_shared<spdlog::logger>("kgsynth", std::make_shared<spdlog::sinks::stderr_sink_mt>());
        // The payload is the body of a JSON object; spdlog supplies ts and level.
        l->set_pattern(R"({"ts":"%Y-%m-%dT%H:%M:%S.%eZ","level":"%l",%v})", spdlog::pattern_time_type::utc);
        l->set_level(spdlog::level::warn);
        return l;
    }();
    return instance;
}

void emit(spdlog::level::level_enum level, std::string_view message, const nlohmann::json& fields) {
    auto& l = *logger();
    if (!l.should_log(level)) return;
    nlohmann::json body = fields.is_object() ? fields : nlohmann::json{{"fields", fields}};
    body["msg"] = message;
    auto text = body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    l.log(level, "{}", std::string_view(text).substr(1, text.size() - 2));
}

}  // namespace

void set_level(std::string_view level) {
    const auto parsed = spdlog::level::from_str(std::string(level));
    if (parsed == spdlog::level::off && level != "off")
        throw ConfigError("unknown log level '" + std::string(level) + "'");
    logger()->set_level(parsed);
}

void debug(std::string_view m, const nlohmann::json& f) { emit(spdlog::level::debug, m, f); }
void info(std::string_view m, const nlohmann::json& f) { emit(spdlog::level::info, m, f); }
void warn(std::string_view m, const nlohmann::json& f) { emit(spdlog::level::warn, m, f); }
void error(std::string_view m, const nlohmann::json& f) { emit(spdlog::level::err, m, f); }

}  // namespace kgsynth::log
