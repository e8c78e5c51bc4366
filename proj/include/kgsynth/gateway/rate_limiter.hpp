#pragma once

#include <chrono>
#include <mutex>

namespace kgsynth::gateway {

/// Token bucket with a burst of one: successive acquisitions are spaced at
/// least 1/rate apart. Safe to share between threads.
class RateLimiter {
public:
    using Clock = std::chrono::steady_clock;

    explicit RateLimiter(double per_second);

    /// Blocks until the caller may issue one request.
    void acquire();

private:
    std::mutex mutex_;
    Clock::duration interval_;
    Clock::time_point next_;
};

}  // namespace kgsynth::gateway
