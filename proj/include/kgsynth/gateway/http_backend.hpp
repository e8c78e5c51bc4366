#pragma once

#include <optional>
#include <string>

#include "kgsynth/gateway/backend.hpp"

namespace kgsynth::gateway {

/// Request body for `prompt` in the configured wire shape. Never contains
/// credentials.
json build_request_body(const BackendConfig& config, std::string_view prompt);

/// Generated text from a response body, or nullopt if the shape is wrong.
std::optional<std::string> extract_response_text(const BackendConfig& config, const json& body);

/// JSON-over-HTTP backend. The bearer token is read once from the
/// environment variable named in the config and is only ever placed in the
/// Authorization header.
class HttpBackend : public Backend {
public:
    /// Throws AuthError when the named environment variable is unset and
    /// ConfigError for an unusable endpoint.
    explicit HttpBackend(const BackendConfig& config);

    BackendReply send(const BackendRequest& request, const BackendConfig& config) override;
    std::string name() const override { return "http"; }

private:
    std::string origin_;  // scheme://host[:port]
    std::string path_;
    std::string token_;
};

}  // namespace kgsynth::gateway
