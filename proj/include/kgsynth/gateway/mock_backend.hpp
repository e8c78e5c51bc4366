#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgsynth/gateway/backend.hpp"

namespace kgsynth::gateway {

/// Thrown by MockBackend::crash_after to stand in for the process dying
/// mid-batch.
struct SimulatedCrash : std::runtime_error {
    SimulatedCrash() : std::runtime_error("simulated crash") {}
};

/// In-process scripted backend for tests and offline runs.
class MockBackend : public Backend {
public:
    /// Returns the response for a prompt, or nullopt when unscripted.
    using Script = std::function<std::optional<std::string>(const std::string& prompt)>;

    explicit MockBackend(Script script);
    static MockBackend from_table(std::map<std::string, std::string> table);
    static MockBackend echo();
    static MockBackend reversed();

    /// Reply used for unscripted prompts. Without one they fail permanently
    /// with a not-found error.
    MockBackend& with_default(std::string response);
    /// The first `n` attempts of every request id fail with `status`.
    MockBackend& fail_first(int n, ReplyStatus status = ReplyStatus::Transient);
    MockBackend& always_fail(ReplyStatus status = ReplyStatus::Transient);
    MockBackend& with_latency(std::chrono::milliseconds latency);
    /// Throw SimulatedCrash on every call after the first `n` completed calls.
    MockBackend& crash_after(std::size_t n);

    BackendReply send(const BackendRequest& request, const BackendConfig& config) override;
    std::string name() const override { return "mock"; }

    std::vector<BackendRequest> call_log() const;
    std::size_t call_count() const;

private:
    Script script_;
    std::optional<std::string> default_;
    int fail_first_ = 0;
    bool always_fail_ = false;
    ReplyStatus fail_status_ = ReplyStatus::Transient;
    std::chrono::milliseconds latency_{0};
    std::optional<std::size_t> crash_after_;

    mutable std::mutex mutex_;
    std::vector<BackendRequest> calls_;
    std::map<std::string, int> attempts_;
    std::size_t completed_ = 0;
};

}  // namespace kgsynth::gateway
