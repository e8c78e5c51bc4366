#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgsynth/common/io.hpp"
#include "kgsynth/gateway/backend.hpp"
#include "kgsynth/gateway/rate_limiter.hpp"
#include "kgsynth/gateway/record.hpp"

namespace kgsynth::gateway {

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Default sleeper: std::this_thread::sleep_for.
Sleeper real_sleeper();

/// Delays before retries 1..n for one request. Step i is
/// min(cap, base * 2^i * (1 + jitter * u_i)) with u_i in [0, 1) drawn from a
/// generator seeded by the request id, so the schedule is reproducible and
/// never decreases.
std::vector<std::chrono::milliseconds> backoff_schedule(const BackendConfig& config, std::string_view request_id,
                                                        int retries);

/// Stable id for the prompt at `index` of a batch.
std::string request_id_for(std::size_t index, std::string_view prompt);

/// Sends one prompt, retrying transient failures. Never throws for backend
/// failures; they come back as a failed record. Exceptions thrown by the
/// backend itself propagate.
GenerationRecord generate(Backend& backend, const BackendConfig& config, std::string_view prompt,
                          std::string request_id = {}, RateLimiter* limiter = nullptr,
                          const Sleeper& sleeper = real_sleeper());

struct BatchItem {
    std::string request_id;
    std::string prompt;
};

struct BatchOptions {
    std::size_t parallelism = 1;
    /// JSON-lines ledger; completed requests found there are not re-issued.
    std::optional<fs::path> checkpoint;
    Sleeper sleeper = real_sleeper();
    std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Runs every item with at most `parallelism` requests in flight and the
/// config's global rate limit. Results are in input order. Failed records do
/// not stop the batch; an exception from the backend does, after in-flight
/// work drains, and is rethrown.
///
/// Throws CheckpointError if the ledger is malformed or belongs to another
/// batch.
std::vector<GenerationRecord> run_batch(Backend& backend, const BackendConfig& config,
                                        std::span<const BatchItem> items, const BatchOptions& options = {});

std::vector<GenerationRecord> run_batch(Backend& backend, const BackendConfig& config,
                                        const std::vector<std::string>& prompts, const BatchOptions& options = {});

/// Successful records in a checkpoint ledger keyed by request id.
std::map<std::string, GenerationRecord> load_checkpoint(const fs::path& path);

}  // namespace kgsynth::gateway
