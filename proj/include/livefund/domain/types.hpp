#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "livefund/domain/date.hpp"
#include "livefund/domain/money.hpp"

namespace livefund {

/// Exchange symbol: 1-6 characters, uppercase letters and dots.
class Ticker {
 public:
  Ticker() = default;
  explicit Ticker(std::string_view symbol);

  static bool is_valid(std::string_view symbol);

  const std::string& str() const { return symbol_; }
  bool empty() const { return symbol_.empty(); }

  auto operator<=>(const Ticker&) const = default;

 private:
  std::string symbol_;
};

enum class SignalDirection { Bullish, Bearish, Neutral };
enum class DecisionAction { Buy, Sell, Hold };
enum class AnalystKind { Technical, Fundamental, Insider, CompanyNews, MacroEconomic, Policy };

inline constexpr std::array<SignalDirection, 3> kAllDirections{
    SignalDirection::Bullish, SignalDirection::Bearish, SignalDirection::Neutral};
inline constexpr std::array<DecisionAction, 3> kAllActions{DecisionAction::Buy, DecisionAction::Sell,
                                                           DecisionAction::Hold};
inline constexpr std::array<AnalystKind, 6> kAllAnalysts{
    AnalystKind::Technical,   AnalystKind::Fundamental,   AnalystKind::Insider,
    AnalystKind::CompanyNews, AnalystKind::MacroEconomic, AnalystKind::Policy};

std::string_view to_string(SignalDirection d);
std::string_view to_string(DecisionAction a);
std::string_view to_string(AnalystKind k);

/// Trimmed, case-insensitive match against the canonical strings.
SignalDirection parse_direction(std::string_view text);
DecisionAction parse_action(std::string_view text);
/// Also tolerates spaces/underscores/hyphens ("Company News", "macro_economic").
AnalystKind parse_analyst(std::string_view text);

inline constexpr std::string_view kSignalErrorSentinel = "No signal provided due to error";
inline constexpr std::string_view kDecisionErrorSentinel = "Just hold due to error";

struct Signal {
  AnalystKind analyst = AnalystKind::Technical;
  Ticker ticker;
  Date date;
  SignalDirection direction = SignalDirection::Neutral;
  std::string justification;
  bool valid = false;

  /// Valid signal; justification must be non-empty.
  static Signal make(AnalystKind analyst, Ticker ticker, Date date, SignalDirection direction,
                     std::string justification);
  static Signal fallback(AnalystKind analyst, Ticker ticker, Date date);

  bool operator==(const Signal&) const = default;
};

struct Decision {
  Ticker ticker;
  Date date;
  DecisionAction action = DecisionAction::Hold;
  std::int64_t shares = 0;
  Price price;
  std::string justification;
  bool valid = false;

  /// Enforces Hold <=> shares == 0, Buy/Sell => shares >= 1, price > 0.
  static Decision make(Ticker ticker, Date date, DecisionAction action, std::int64_t shares,
                       Price price, std::string justification);
  static Decision fallback(Ticker ticker, Date date, Price price);

  bool operator==(const Decision&) const = default;
};

struct Position {
  Ticker ticker;
  std::int64_t shares = 0;
  Price cost_basis;  // volume-weighted average purchase price

  bool operator==(const Position&) const = default;
};

using PriceMap = std::map<Ticker, Price>;

struct Portfolio {
  Money cash;
  std::map<Ticker, Position> positions;
  Date as_of;

  static Portfolio with_cash(Money cash, Date as_of);

  std::int64_t shares_of(const Ticker& t) const;
  /// Throws InvalidArgument when any invariant is broken.
  void check_invariants() const;

  bool operator==(const Portfolio&) const = default;
};

struct TradeRecord {
  std::string run_id;
  Date date;
  Ticker ticker;
  DecisionAction action = DecisionAction::Hold;
  std::int64_t requested_shares = 0;
  std::int64_t executed_shares = 0;
  Price price;
  Money cash_after;
  std::int64_t shares_after = 0;
  std::string justification;

  bool operator==(const TradeRecord&) const = default;
};

/// Most-recent-first, bounded.
using DecisionMemory = std::vector<Decision>;

/// New list with `d` in front, truncated to `capacity`. The input is untouched.
DecisionMemory push_decision_memory(const DecisionMemory& memory, const Decision& d,
                                    std::size_t capacity);

/// Per-run, per-day state carried through the workflow.
struct FundState {
  std::string run_id;
  Date trading_date;
  Portfolio portfolio;
  std::map<Ticker, std::vector<Signal>> signals_today;
  std::map<Ticker, DecisionMemory> decision_memory;
  std::size_t memory_capacity = 5;
};

}  // namespace livefund
