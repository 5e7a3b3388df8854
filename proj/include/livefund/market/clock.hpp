#pragma once

#include <functional>

#include "livefund/domain/date.hpp"

namespace livefund::market {

enum class ClockMode { Live, Replay };

/// Forward-only simulation date. Every gateway fetch is bounded by it.
class SimulationClock {
 public:
  using TodayFn = std::function<Date()>;

  SimulationClock(ClockMode mode, Date start, TodayFn today = &Date::today_utc);

  static SimulationClock replay(Date start) { return SimulationClock(ClockMode::Replay, start); }
  static SimulationClock live(TodayFn today = &Date::today_utc);

  Date current_date() const { return current_; }
  ClockMode mode() const { return mode_; }

  /// Moves to `next`; rejects going backwards and, in live mode, going past today.
  void advance_to(Date next);

 private:
  ClockMode mode_;
  Date current_;
  TodayFn today_;
};

}  // namespace livefund::market
