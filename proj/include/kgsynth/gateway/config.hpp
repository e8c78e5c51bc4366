#pragma once

#include <chrono>
#include <string>

#include "kgsynth/common/io.hpp"

namespace kgsynth::gateway {

/// Request/response layout spoken by the HTTP backend.
enum class WireShape {
    Chat,        // {"model","messages":[...]} -> choices[0].message.content
    Completion,  // {"model","prompt"}         -> choices[0].text
};

std::string_view to_string(WireShape shape) noexcept;
WireShape wire_shape_from_string(std::string_view s);

struct BackendConfig {
    std::string endpoint;
    std::string model_id;
    // Unvalidated default; decoding parameters are backend specific.
    double temperature = 1.0;
    int max_tokens = 1024;
    std::chrono::milliseconds timeout{60'000};
    int max_retries = 3;
    double rate_limit = 5.0;  // requests per second
    /// Name of the environment variable holding the bearer token. The token
    /// itself never lives in the config.
    std::string auth_token_env;
    WireShape wire = WireShape::Chat;

    std::chrono::milliseconds backoff_base{500};
    std::chrono::milliseconds backoff_cap{30'000};
    double jitter = 0.5;  // fraction of the step added at random, in [0, 1]

    /// Every violated constraint, empty when valid.
    std::vector<std::string> problems() const;
    /// Throws ConfigError listing every problem.
    void validate() const;

    /// Sampling parameters recorded with each generation.
    json params_snapshot() const;
};

json to_json(const BackendConfig& config);
/// Missing keys keep their defaults.
BackendConfig backend_config_from_json(const json& j);

}  // namespace kgsynth::gateway
