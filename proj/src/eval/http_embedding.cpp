#include "httplib.h"
#include "kgsynth/common/error.hpp"
#include "kgsynth/common/io.hpp"
#include "kgsynth/eval/similarity.hpp"

namespace kgsynth::eval {

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string endpoint, int timeout_ms) : timeout_ms_(timeout_ms) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("embedding endpoint is not a URL: '" + endpoint + "'");
    const auto path_start = endpoint.find('/', scheme_end + 3);
    origin_ = endpoint.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
}

Embeddings HttpEmbeddingProvider::embed(const std::vector<std::string>& tokens) {
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
    client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
    const auto result = client.Post(path_, json{{"tokens", tokens}}.dump(), "application/json");
    if (!result) throw ProviderError("embedding request failed: " + httplib::to_string(result.error()));
    if (result->status != 200) throw ProviderError("embedding endpoint returned HTTP " + std::to_string(result->status));
    const auto body = json::parse(result->body, nullptr, false);
    if (body.is_discarded() || !body.contains("vectors")) throw ProviderError("embedding response lacks \"vectors\"");
    try {
        return body["vectors"].get<Embeddings>();
    } catch (const json::exception& e) {
        throw ProviderError(std::string("embedding response: ") + e.what());
    }
}

}  // namespace kgsynth::eval
