#include "kgsynth/gateway/http_backend.hpp"

#include <cstdlib>

#include "httplib.h"
#include "kgsynth/common/error.hpp"

namespace kgsynth::gateway {

json build_request_body(const BackendConfig& config, std::string_view prompt) {
    json body{{"model", config.model_id}, {"temperature", config.temperature}, {"max_tokens", config.max_tokens}};
    if (config.wire == WireShape::Chat)
        body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
    else
        body["prompt"] = prompt;
    return body;
}

std::optional<std::string> extract_response_text(const BackendConfig& config, const json& body) {
    const auto* choices = body.is_object() && body.contains("choices") ? &body["choices"] : nullptr;
    if (!choices || !choices->is_array() || choices->empty()) return std::nullopt;
    const auto& first = (*choices)[0];
    if (config.wire == WireShape::Chat) {
        if (first.contains("message") && first["message"].contains("content") &&
            first["message"]["content"].is_string())
            return first["message"]["content"].get<std::string>();
    } else if (first.contains("text") && first["text"].is_string()) {
        return first["text"].get<std::string>();
    }
    return std::nullopt;
}

HttpBackend::HttpBackend(const BackendConfig& config) {
    const auto& url = config.endpoint;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("backend endpoint is not a URL: '" + url + "'");
    const auto path_start = url.find('/', scheme_end + 3);
    origin_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    const auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw ConfigError("unsupported URL scheme '" + scheme + "'");

    if (!config.auth_token_env.empty()) {
        const char* token = std::getenv(config.auth_token_env.c_str());
        if (!token || !*token) throw AuthError("environment variable " + config.auth_token_env + " is not set");
        token_ = token;
    }
}

BackendReply HttpBackend::send(const BackendRequest& request, const BackendConfig& config) {
    httplib::Client client(origin_);
    const auto seconds = config.timeout.count() / 1000;
    const auto micros = (config.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);

    httplib::Headers headers{{"X-Request-Id", request.request_id}};
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

    BackendReply reply;
    const auto result = client.Post(path_, headers, build_request_body(config, request.prompt).dump(), "application/json");
    if (!result) {
        reply.status = ReplyStatus::Transient;
        reply.error = "transport error: " + httplib::to_string(result.error());
        return reply;
    }
    reply.http_status = result->status;
    if (result->status == 401 || result->status == 403) {
        reply.status = ReplyStatus::AuthRejected;
        reply.error = "credentials rejected (HTTP " + std::to_string(result->status) + ")";
    } else if (result->status == 429 || result->status >= 500) {
        reply.status = ReplyStatus::Transient;
        reply.error = "HTTP " + std::to_string(result->status);
    } else if (result->status < 200 || result->status >= 300) {
        reply.status = ReplyStatus::Permanent;
        reply.error = "HTTP " + std::to_string(result->status) + ": " + result->body.substr(0, 200);
    } else {
        const auto body = json::parse(result->body, nullptr, false);
        auto text = body.is_discarded() ? std::nullopt : extract_response_text(config, body);
        if (text) {
            reply.text = std::move(*text);
        } else {
            reply.status = ReplyStatus::Permanent;
            reply.error = "response body does not match the " + std::string(to_string(config.wire)) + " shape";
        }
    }
    return reply;
}

}  // namespace kgsynth::gateway
