#include "kgsynth/gateway/config.hpp"

#include "kgsynth/common/error.hpp"

namespace kgsynth::gateway {

std::string_view to_string(WireShape shape) noexcept {
    return shape == WireShape::Chat ? "chat" : "completion";
}

WireShape wire_shape_from_string(std::string_view s) {
    if (s == "chat") return WireShape::Chat;
    if (s == "completion") return WireShape::Completion;
    throw ConfigError("unknown wire shape '" + std::string(s) + "'");
}

std::vector<std::string> BackendConfig::problems() const {
    std::vector<std::string> out;
    if (!(temperature >= 0.0)) out.push_back("backend.temperature must be >= 0");
    if (max_tokens <= 0) out.push_back("backend.max_tokens must be positive");
    if (timeout.count() <= 0) out.push_back("backend.timeout_ms must be positive");
    if (max_retries < 0) out.push_back("backend.max_retries must be >= 0");
    if (!(rate_limit > 0.0)) out.push_back("backend.rate_limit must be > 0");
    if (backoff_base.count() < 0 || backoff_cap < backoff_base)
        out.push_back("backend.backoff_base_ms must be >= 0 and <= backoff_cap_ms");
    if (!(jitter >= 0.0 && jitter <= 1.0)) out.push_back("backend.jitter must be in [0, 1]");
    return out;
}

void BackendConfig::validate() const {
    const auto p = problems();
    if (p.empty()) return;
    std::string message = "invalid backend config:";
    for (const auto& s : p) message += "\n  - " + s;
    throw ConfigError(message);
}

json BackendConfig::params_snapshot() const {
    return {{"model", model_id}, {"temperature", temperature}, {"max_tokens", max_tokens}, {"wire", to_string(wire)}};
}

json to_json(const BackendConfig& c) {
    return {{"endpoint", c.endpoint},
            {"model", c.model_id},
            {"temperature", c.temperature},
            {"max_tokens", c.max_tokens},
            {"timeout_ms", c.timeout.count()},
            {"max_retries", c.max_retries},
            {"rate_limit", c.rate_limit},
            {"auth_token_env", c.auth_token_env},
            {"wire", to_string(c.wire)},
            {"backoff_base_ms", c.backoff_base.count()},
            {"backoff_cap_ms", c.backoff_cap.count()},
            {"jitter", c.jitter}};
}

BackendConfig backend_config_from_json(const json& j) {
    BackendConfig c;
    try {
        c.endpoint = j.value("endpoint", c.endpoint);
        c.model_id = j.value("model", c.model_id);
        c.temperature = j.value("temperature", c.temperature);
        c.max_tokens = j.value("max_tokens", c.max_tokens);
        c.timeout = std::chrono::milliseconds(j.value("timeout_ms", c.timeout.count()));
        c.max_retries = j.value("max_retries", c.max_retries);
        c.rate_limit = j.value("rate_limit", c.rate_limit);
        c.auth_token_env = j.value("auth_token_env", c.auth_token_env);
        c.wire = wire_shape_from_string(j.value("wire", std::string(to_string(c.wire))));
        c.backoff_base = std::chrono::milliseconds(j.value("backoff_base_ms", c.backoff_base.count()));
        c.backoff_cap = std::chrono::milliseconds(j.value("backoff_cap_ms", c.backoff_cap.count()));
        c.jitter = j.value("jitter", c.jitter);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("backend config: ") + e.what());
    }
    return c;
}

}  // namespace kgsynth::gateway
