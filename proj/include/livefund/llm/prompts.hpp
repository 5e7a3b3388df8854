#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "livefund/domain/types.hpp"
#include "livefund/indicators/technical.hpp"
#include "livefund/llm/types.hpp"
#include "livefund/market/records.hpp"

namespace livefund::llm {

/// Data handed to an analyst. Which alternative is legal depends on the
/// analyst kind; a mismatch raises PayloadMismatch.
using AnalystPayload =
    std::variant<indicators::TechnicalSummary, std::vector<market::NewsItem>,
                 std::vector<market::InsiderTransaction>, std::optional<market::FundamentalsSnapshot>,
                 std::vector<market::MacroIndicator>>;

/// Ticker is absent for Policy and MacroEconomic.
Prompt render_analyst_prompt(AnalystKind kind, const std::optional<Ticker>& ticker, Date date,
                             const AnalystPayload& payload);

Prompt render_manager_prompt(const Ticker& ticker, const DecisionMemory& memory, Price current_price,
                             std::int64_t holding_shares, std::int64_t tradable_shares,
                             const std::vector<Signal>& signals);

Prompt render_planner_prompt(const std::vector<Ticker>& universe, const Portfolio& portfolio,
                             const std::vector<AnalystKind>& available);

/// Price with trailing zeros trimmed to at least two decimals: "156.12".
std::string display_price(Price p);

}  // namespace livefund::llm
