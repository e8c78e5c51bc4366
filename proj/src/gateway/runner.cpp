#include "kgsynth/gateway/runner.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "kgsynth/common/error.hpp"
#include "kgsynth/common/log.hpp"
#include "kgsynth/common/rng.hpp"

namespace kgsynth::gateway {
namespace {

using std::chrono::milliseconds;

// Appends ledger lines; one flushed line per completed request.
class CheckpointWriter {
public:
    explicit CheckpointWriter(const fs::path& path) : out_(path, std::ios::binary | std::ios::app) {
        if (!out_) throw IoError("cannot open checkpoint " + path.string());
    }

    void append(const GenerationRecord& record) {
        const json line{{"request_id", record.request_id},
                        {"status", record.ok() ? "success" : "failed"},
                        {"record", to_json(record)}};
        std::lock_guard lock(mutex_);
        out_ << canonical_dump(line) << '\n';
        out_.flush();
    }

private:
    std::mutex mutex_;
    std::ofstream out_;
};

}  // namespace

Sleeper real_sleeper() {
    return [](milliseconds d) { std::this_thread::sleep_for(d); };
}

std::vector<milliseconds> backoff_schedule(const BackendConfig& config, std::string_view request_id, int retries) {
    Rng rng(derive_seed(0x6261636b6f6666ULL, request_id));
    std::vector<milliseconds> out;
    const double base = static_cast<double>(config.backoff_base.count());
    const double cap = static_cast<double>(config.backoff_cap.count());
    for (int i = 0; i < retries; ++i) {
        const double step = base * std::ldexp(1.0, i) * (1.0 + config.jitter * rng.uniform01());
        out.emplace_back(static_cast<milliseconds::rep>(std::min(cap, step)));
    }
    return out;
}

std::string request_id_for(std::size_t index, std::string_view prompt) {
    return "req-" + std::to_string(index) + "-" + hex64(fnv1a64(prompt)).substr(0, 8);
}

GenerationRecord generate(Backend& backend, const BackendConfig& config, std::string_view prompt,
                          std::string request_id, RateLimiter* limiter, const Sleeper& sleeper) {
    if (prompt.empty()) throw DomainError("empty prompt");
    config.validate();
    if (request_id.empty()) request_id = "req-" + hex64(fnv1a64(prompt));

    GenerationRecord record;
    record.request_id = request_id;
    record.prompt = std::string(prompt);
    record.backend = backend.name() + ":" + config.model_id;
    record.params = config.params_snapshot();
    record.created_at = utc_timestamp();

    const auto schedule = backoff_schedule(config, request_id, config.max_retries);
    const auto started = std::chrono::steady_clock::now();
    const BackendRequest request{request_id, std::string(prompt)};
    for (int attempt = 1; attempt <= config.max_retries + 1; ++attempt) {
        if (limiter) limiter->acquire();
        auto reply = backend.send(request, config);
        record.attempt_count = attempt;
        if (reply.status == ReplyStatus::Ok) {
            record.status = RecordStatus::Success;
            record.response_text = std::move(reply.text);
            break;
        }
        record.error = std::move(reply.error);
        if (reply.status == ReplyStatus::AuthRejected) {
            record.error_kind = "auth";
            break;
        }
        if (reply.status == ReplyStatus::Permanent) {
            record.error_kind = "permanent";
            break;
        }
        if (attempt == config.max_retries + 1) {
            record.error_kind = "retries_exhausted";
            break;
        }
        log::debug("transient backend failure, retrying",
                   {{"request_id", request_id}, {"attempt", attempt}, {"error", record.error}});
        sleeper(schedule[static_cast<std::size_t>(attempt - 1)]);
    }
    if (record.ok()) {
        record.error.clear();
        record.error_kind.clear();
    }
    record.latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return record;
}

std::map<std::string, GenerationRecord> load_checkpoint(const fs::path& path) {
    std::map<std::string, GenerationRecord> done;
    if (!fs::exists(path)) return done;
    const auto content = read_text(path);
    std::size_t pos = 0;
    std::size_t lineno = 0;
    while (pos < content.size()) {
        ++lineno;
        const auto nl = content.find('\n', pos);
        const bool torn = nl == std::string::npos;
        const auto line = content.substr(pos, torn ? std::string::npos : nl - pos);
        const auto next = torn ? content.size() : nl + 1;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            pos = next;
            continue;
        }
        const auto row = json::parse(line, nullptr, false);
        if (row.is_discarded()) {
            if (torn) {
                // A write cut short by a crash; drop it so appends stay line aligned.
                log::warn("dropping torn checkpoint tail", {{"path", path.string()}, {"line", lineno}});
                fs::resize_file(path, pos);
                break;
            }
            throw CheckpointError(path.string() + ":" + std::to_string(lineno) + ": not valid JSON");
        }
        try {
            const auto id = row.at("request_id").get<std::string>();
            const auto status = row.at("status").get<std::string>();
            auto record = record_from_json(row.at("record"));
            if (record.request_id != id || (status == "success") != record.ok())
                throw CheckpointError("inconsistent entry");
            if (record.ok()) done.insert_or_assign(id, std::move(record));
        } catch (const std::exception& e) {
            throw CheckpointError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        pos = next;
    }
    return done;
}

std::vector<GenerationRecord> run_batch(Backend& backend, const BackendConfig& config,
                                        std::span<const BatchItem> items, const BatchOptions& options) {
    if (options.parallelism == 0) throw ConfigError("parallelism must be >= 1");
    config.validate();

    std::set<std::string> ids;
    for (const auto& item : items)
        if (!ids.insert(item.request_id).second) throw ConfigError("duplicate request id " + item.request_id);

    std::vector<std::optional<GenerationRecord>> results(items.size());
    std::unique_ptr<CheckpointWriter> writer;
    if (options.checkpoint) {
        auto done = load_checkpoint(*options.checkpoint);
        for (const auto& [id, _] : done)
            if (!ids.contains(id))
                throw CheckpointError("checkpoint " + options.checkpoint->string() + " has request " + id +
                                      " which is not part of this batch");
        for (std::size_t i = 0; i < items.size(); ++i)
            if (auto it = done.find(items[i].request_id); it != done.end()) {
                if (it->second.prompt != items[i].prompt)
                    throw CheckpointError("checkpoint prompt for " + it->first + " differs from the batch");
                results[i] = std::move(it->second);
            }
        writer = std::make_unique<CheckpointWriter>(*options.checkpoint);
    }

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < items.size(); ++i)
        if (!results[i]) pending.push_back(i);
    if (pending.size() < items.size())
        log::info("resuming batch from checkpoint",
                  {{"completed", items.size() - pending.size()}, {"remaining", pending.size()}});

    RateLimiter limiter(config.rate_limit);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> finished{items.size() - pending.size()};
    std::atomic<bool> stop{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&] {
        while (!stop.load()) {
            const auto slot = next.fetch_add(1);
            if (slot >= pending.size()) return;
            const auto index = pending[slot];
            try {
                auto record = generate(backend, config, items[index].prompt, items[index].request_id, &limiter,
                                       options.sleeper);
                if (writer) writer->append(record);
                results[index] = std::move(record);
                const auto done = ++finished;
                if (options.progress) options.progress(done, items.size());
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                stop = true;
            }
        }
    };
    {
        std::vector<std::jthread> threads;
        const auto n = std::min(options.parallelism, pending.size());
        for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
    }
    if (first_error) std::rethrow_exception(first_error);

    std::vector<GenerationRecord> out;
    out.reserve(items.size());
    for (auto& r : results) out.push_back(std::move(*r));
    return out;
}

std::vector<GenerationRecord> run_batch(Backend& backend, const BackendConfig& config,
                                        const std::vector<std::string>& prompts, const BatchOptions& options) {
    std::vector<BatchItem> items;
    items.reserve(prompts.size());
    for (std::size_t i = 0; i < prompts.size(); ++i) items.push_back({request_id_for(i, prompts[i]), prompts[i]});
    return run_batch(backend, config, std::span<const BatchItem>(items), options);
}

}  // namespace kgsynth::gateway
