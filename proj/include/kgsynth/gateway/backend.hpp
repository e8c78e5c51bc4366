#pragma once

#include <string>

#include "kgsynth/gateway/config.hpp"

namespace kgsynth::gateway {

enum class ReplyStatus {
    Ok,
    Transient,     // 429, 5xx, timeout, connection failure: retried
    Permanent,     // other 4xx, malformed reply: not retried
    AuthRejected,  // 401/403: not retried
};

struct BackendRequest {
    std::string request_id;
    std::string prompt;
};

struct BackendReply {
    ReplyStatus status = ReplyStatus::Ok;
    std::string text;
    int http_status = 0;
    std::string error;
};

/// A text-generation service. Implementations must be safe to call from
/// several threads at once.
class Backend {
public:
    virtual ~Backend() = default;
    virtual BackendReply send(const BackendRequest& request, const BackendConfig& config) = 0;
    virtual std::string name() const = 0;
};

}  // namespace kgsynth::gateway
