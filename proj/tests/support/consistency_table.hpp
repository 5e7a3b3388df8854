#pragma once

#include <array>

#include "livefund/domain/types.hpp"

namespace livefund::testing {

/// Hand-classified signal mixes. Invalid entries are fallback Neutrals.
struct ConsistencyCase {
  int bullish;
  int bearish;
  int neutral;
  int invalid;
  DecisionAction action;
  bool consistent;
};

inline constexpr std::array<ConsistencyCase, 20> kConsistencyTable{{
    {3, 0, 1, 0, DecisionAction::Buy, true},
    {2, 2, 0, 0, DecisionAction::Hold, true},
    {0, 3, 1, 0, DecisionAction::Buy, false},
    {0, 0, 0, 0, DecisionAction::Hold, true},
    {0, 0, 0, 0, DecisionAction::Buy, false},
    {0, 0, 0, 0, DecisionAction::Sell, false},
    {0, 0, 4, 0, DecisionAction::Hold, true},
    {0, 0, 4, 0, DecisionAction::Buy, false},
    {1, 0, 3, 0, DecisionAction::Buy, true},
    {1, 0, 3, 0, DecisionAction::Hold, false},
    {0, 1, 3, 0, DecisionAction::Sell, true},
    {2, 1, 1, 0, DecisionAction::Buy, true},
    {2, 1, 1, 0, DecisionAction::Sell, false},
    {1, 2, 1, 0, DecisionAction::Sell, true},
    {1, 1, 2, 0, DecisionAction::Buy, false},
    {1, 1, 2, 0, DecisionAction::Sell, false},
    {0, 0, 0, 4, DecisionAction::Hold, true},
    {0, 0, 0, 4, DecisionAction::Buy, false},
    {1, 0, 0, 3, DecisionAction::Buy, true},
    {0, 2, 0, 2, DecisionAction::Hold, false},
}};

inline std::vector<Signal> signals_for(const ConsistencyCase& c) {
  std::vector<Signal> out;
  const Ticker t("KO");
  const Date day(2025, 4, 1);
  auto add = [&](int n, SignalDirection dir) {
    for (int i = 0; i < n; ++i) out.push_back(Signal::make(AnalystKind::Technical, t, day, dir, "x"));
  };
  add(c.bullish, SignalDirection::Bullish);
  add(c.bearish, SignalDirection::Bearish);
  add(c.neutral, SignalDirection::Neutral);
  for (int i = 0; i < c.invalid; ++i) out.push_back(Signal::fallback(AnalystKind::Policy, t, day));
  return out;
}

inline Decision decision_for(const ConsistencyCase& c) {
  const std::int64_t shares = c.action == DecisionAction::Hold ? 0 : 5;
  return Decision::make(Ticker("KO"), Date(2025, 4, 1), c.action, shares, Price::parse("60"), "x");
}

}  // namespace livefund::testing
