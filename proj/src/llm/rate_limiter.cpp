#include "livefund/llm/rate_limiter.hpp"

#include <algorithm>
#include <thread>

#include "livefund/domain/error.hpp"

namespace livefund::llm {

TokenBucket::TokenBucket(double tokens_per_second, double burst)
    : rate_(tokens_per_second), capacity_(std::max(1.0, burst)), tokens_(capacity_), last_(Clock::now()) {
  if (tokens_per_second < 0) raise(ErrorKind::InvalidArgument, "negative rate limit");
}

void TokenBucket::refill(Clock::time_point now) {
  const std::chrono::duration<double> elapsed = now - last_;
  tokens_ = std::min(capacity_, tokens_ + elapsed.count() * rate_);
  last_ = now;
}

bool TokenBucket::try_acquire() {
  if (rate_ == 0) return true;
  std::lock_guard lock(mutex_);
  refill(Clock::now());
  if (tokens_ >= 1.0) {
    tokens_ -= 1.0;
    return true;
  }
  return false;
}

void TokenBucket::acquire() {
  if (rate_ == 0) return;
  for (;;) {
    std::chrono::duration<double> wait{};
    {
      std::lock_guard lock(mutex_);
      refill(Clock::now());
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
    }
    std::this_thread::sleep_for(wait);
  }
}

}  // namespace livefund::llm
