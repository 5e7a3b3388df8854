#include "livefund/market/clock.hpp"

#include "livefund/domain/error.hpp"

namespace livefund::market {

SimulationClock::SimulationClock(ClockMode mode, Date start, TodayFn today)
    : mode_(mode), current_(start), today_(std::move(today)) {
  if (mode_ == ClockMode::Live && current_ > today_()) {
    raise(ErrorKind::InvalidArgument, "live clock cannot start after today");
  }
}

SimulationClock SimulationClock::live(TodayFn today) {
  const Date now = today();
  return SimulationClock(ClockMode::Live, now, std::move(today));
}

void SimulationClock::advance_to(Date next) {
  if (next < current_) {
    raise(ErrorKind::InvalidArgument,
          "clock only moves forward (" + current_.iso() + " -> " + next.iso() + ")");
  }
  if (mode_ == ClockMode::Live && next > today_()) {
    raise(ErrorKind::InvalidArgument, "live clock cannot pass today's date");
  }
  current_ = next;
}

}  // namespace livefund::market
