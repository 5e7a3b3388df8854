#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "livefund/domain/types.hpp"

namespace livefund::llm {

struct ParsedSignal {
  SignalDirection direction = SignalDirection::Neutral;
  std::string justification;  // never empty
};

struct ParsedDecision {
  DecisionAction action = DecisionAction::Hold;
  std::int64_t shares = 0;
  std::optional<Price> price;
  std::string justification;
  bool shares_normalized = false;  // Hold arrived with nonzero shares
};

/// Accepts a JSON object (optionally inside prose or a code fence) or
/// "key: value" lines. Throws MalformedSignalResponse.
ParsedSignal parse_signal_response(std::string_view text);

/// Same input forms. Throws MalformedDecisionResponse.
ParsedDecision parse_decision_response(std::string_view text);

/// JSON array of names or {"analysts": [...]}; result is intersected with
/// `available`, de-duplicated, in response order. Throws
/// MalformedPlannerResponse when nothing usable remains.
std::vector<AnalystKind> parse_planner_response(std::string_view text, const std::vector<AnalystKind>& available);

}  // namespace livefund::llm
