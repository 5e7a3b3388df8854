#pragma once

#include <chrono>
#include <functional>
#include <mutex>

namespace livefund::llm {

/// Token bucket shared by all callers of one provider. A rate of zero
/// disables limiting.
class TokenBucket {
 public:
  using Clock = std::chrono::steady_clock;

  TokenBucket(double tokens_per_second, double burst);

  bool try_acquire();
  /// Blocks until a token is available.
  void acquire();

  double rate() const { return rate_; }

 private:
  void refill(Clock::time_point now);

  double rate_;
  double capacity_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mutex_;
};

}  // namespace livefund::llm
