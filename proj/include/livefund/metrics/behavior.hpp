#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "livefund/domain/types.hpp"
#include "livefund/ledger/ledger.hpp"

namespace livefund::metrics {

struct Validity {
  std::size_t signals = 0;
  std::size_t valid_signals = 0;
  std::size_t decisions = 0;
  std::size_t valid_decisions = 0;

  /// 1.0 for an empty denominator.
  double signal_rate() const;
  double decision_rate() const;
};

Validity validity_rates(const std::vector<ledger::LedgerEntry>& entries);

enum class Dominance { Bullish, Bearish, None };

/// Strict majority among valid directional signals; invalid ones are ignored.
Dominance dominant_direction(const std::vector<Signal>& signals);

struct ConsistencyVerdict {
  bool consistent = false;
  std::string reason;
};

ConsistencyVerdict classify_consistency(const std::vector<Signal>& signals, const Decision& decision);

enum class Effectiveness { Effective, NotEffective, NotApplicable };
std::string_view to_string(Effectiveness e);

/// `next_price` is absent on the final day of a run.
Effectiveness classify_effectiveness(const Decision& decision, std::optional<Price> next_price);

/// Per-ticker closes as seen by the engine (decision prices), by date.
class MarkBook {
 public:
  static MarkBook from_entries(const std::vector<ledger::LedgerEntry>& entries);

  void add(const Ticker& ticker, Date date, Price price);
  std::optional<Price> at(const Ticker& ticker, Date date) const;
  /// Price on the first recorded date after `date`.
  std::optional<Price> next_after(const Ticker& ticker, Date date) const;
  /// All tickers priced on `date`.
  PriceMap prices_on(Date date) const;
  std::optional<Date> last_date() const;

 private:
  std::map<Ticker, std::map<Date, Price>> marks_;
};

/// Next-day mark win rate over executed Buy/Sell trades, skipping the
/// final day. Absent when no trade qualifies. Throws MissingNextPrice.
std::optional<double> win_rate(const std::vector<TradeRecord>& trades, const MarkBook& marks, Date final_date);

struct Distributions {
  // Bullish, Bearish, Neutral; invalid fallbacks are counted as Neutral and
  // again under invalid_signals.
  std::map<AnalystKind, std::array<std::size_t, 3>> directions;
  std::map<AnalystKind, std::size_t> invalid_signals;
  // Buy, Sell, Hold; invalid fallbacks are Holds.
  std::map<Ticker, std::array<std::size_t, 3>> actions;
  std::map<Ticker, std::size_t> invalid_decisions;

  std::size_t signal_total() const;
  std::size_t decision_total() const;
};

Distributions distributions(const std::vector<ledger::LedgerEntry>& entries);

struct BehaviorSummary {
  std::size_t consistency_total = 0;
  std::size_t consistent = 0;
  std::size_t effectiveness_applicable = 0;
  std::size_t effective = 0;
  std::map<DecisionAction, std::array<std::size_t, 2>> consistency_by_action;  // {consistent, total}
};

/// Consistency over valid decisions and effectiveness over executed trades.
BehaviorSummary analyze_behavior(const std::vector<ledger::LedgerEntry>& entries, const MarkBook& marks);

}  // namespace livefund::metrics
