#include "kgsynth/gateway/rate_limiter.hpp"

#include <thread>

#include "kgsynth/common/error.hpp"

namespace kgsynth::gateway {

RateLimiter::RateLimiter(double per_second) {
    if (!(per_second > 0.0)) throw ConfigError("rate limit must be > 0");
    interval_ = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / per_second));
    next_ = Clock::now();
}

void RateLimiter::acquire() {
    Clock::time_point slot;
    {
        std::lock_guard lock(mutex_);
        const auto now = Clock::now();
        slot = std::max(now, next_);
        next_ = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
}

}  // namespace kgsynth::gateway
