#pragma once

#include <string_view>

#include "json.hpp"

// Line-delimited JSON logging to stderr.
namespace kgsynth::log {

/// "trace", "debug", "info", "warn", "error" or "off". Throws ConfigError otherwise.
void set_level(std::string_view level);

void debug(std::string_view message, const nlohmann::json& fields = nlohmann::json::object());
void info(std::string_view message, const nlohmann::json& fields = nlohmann::json::object());
void warn(std::string_view message, const nlohmann::json& fields = nlohmann::json::object());
void error(std::string_view message, const nlohmann::json& fields = nlohmann::json::object());

}  // namespace kgsynth::log
