#include "kgsynth/gateway/mock_backend.hpp"

#include <algorithm>
#include <thread>

namespace kgsynth::gateway {

MockBackend::MockBackend(Script script) : script_(std::move(script)) {}

MockBackend MockBackend::from_table(std::map<std::string, std::string> table) {
    return MockBackend([table = std::move(table)](const std::string& prompt) -> std::optional<std::string> {
        const auto it = table.find(prompt);
        if (it == table.end()) return std::nullopt;
        return it->second;
    });
}

MockBackend MockBackend::echo() {
    return MockBackend([](const std::string& prompt) -> std::optional<std::string> { return prompt; });
}

MockBackend MockBackend::reversed() {
    return MockBackend([](const std::string& prompt) -> std::optional<std::string> {
        return std::string(prompt.rbegin(), prompt.rend());
    });
}

MockBackend& MockBackend::with_default(std::string response) {
    default_ = std::move(response);
    return *this;
}

MockBackend& MockBackend::fail_first(int n, ReplyStatus status) {
    fail_first_ = n;
    fail_status_ = status;
    return *this;
}

MockBackend& MockBackend::always_fail(ReplyStatus status) {
    always_fail_ = true;
    fail_status_ = status;
    return *this;
}

MockBackend& MockBackend::with_latency(std::chrono::milliseconds latency) {
    latency_ = latency;
    return *this;
}

MockBackend& MockBackend::crash_after(std::size_t n) {
    crash_after_ = n;
    return *this;
}

BackendReply MockBackend::send(const BackendRequest& request, const BackendConfig&) {
    int attempt;
    {
        std::lock_guard lock(mutex_);
        if (crash_after_ && completed_ >= *crash_after_) throw SimulatedCrash();
        calls_.push_back(request);
        attempt = ++attempts_[request.request_id];
    }
    if (latency_.count() > 0) std::this_thread::sleep_for(latency_);

    BackendReply reply;
    if (always_fail_ || attempt <= fail_first_) {
        reply.status = fail_status_;
        reply.http_status = fail_status_ == ReplyStatus::AuthRejected ? 401
                            : fail_status_ == ReplyStatus::Permanent  ? 400
                                                                      : 503;
        reply.error = "injected failure on attempt " + std::to_string(attempt);
    } else if (auto text = script_(request.prompt)) {
        reply.text = std::move(*text);
        reply.http_status = 200;
    } else if (default_) {
        reply.text = *default_;
        reply.http_status = 200;
    } else {
        reply.status = ReplyStatus::Permanent;
        reply.http_status = 404;
        reply.error = "no scripted response for prompt";
    }
    std::lock_guard lock(mutex_);
    ++completed_;
    return reply;
}

std::vector<BackendRequest> MockBackend::call_log() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

std::size_t MockBackend::call_count() const {
    std::lock_guard lock(mutex_);
    return calls_.size();
}

}  // namespace kgsynth::gateway
