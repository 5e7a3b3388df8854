#include "livefund/metrics/behavior.hpp"

#include "livefund/domain/error.hpp"

namespace livefund::metrics {

double Validity::signal_rate() const {
  return signals == 0 ? 1.0 : static_cast<double>(valid_signals) / static_cast<double>(signals);
}

double Validity::decision_rate() const {
  return decisions == 0 ? 1.0 : static_cast<double>(valid_decisions) / static_cast<double>(decisions);
}

Validity validity_rates(const std::vector<ledger::LedgerEntry>& entries) {
  Validity v;
  for (const auto& e : entries) {
    if (const auto* s = std::get_if<Signal>(&e.payload)) {
      ++v.signals;
      if (s->valid) ++v.valid_signals;
    } else if (const auto* d = std::get_if<Decision>(&e.payload)) {
      ++v.decisions;
      if (d->valid) ++v.valid_decisions;
    }
  }
  return v;
}

Dominance dominant_direction(const std::vector<Signal>& signals) {
  std::size_t bull = 0;
  std::size_t bear = 0;
  for (const auto& s : signals) {
    if (!s.valid) continue;
    if (s.direction == SignalDirection::Bullish) ++bull;
    if (s.direction == SignalDirection::Bearish) ++bear;
  }
  const std::size_t directional = bull + bear;
  if (directional == 0) return Dominance::None;
  if (2 * bull > directional) return Dominance::Bullish;
  if (2 * bear > directional) return Dominance::Bearish;
  return Dominance::None;
}

ConsistencyVerdict classify_consistency(const std::vector<Signal>& signals, const Decision& decision) {
  const Dominance dom = dominant_direction(signals);
  switch (decision.action) {
    case DecisionAction::Buy:
      if (dom == Dominance::Bullish) return {true, "Buy follows dominant Bullish signals"};
      return {false, dom == Dominance::Bearish ? "Buy against dominant Bearish signals"
                                               : "Buy without a dominant Bullish direction"};
    case DecisionAction::Sell:
      if (dom == Dominance::Bearish) return {true, "Sell follows dominant Bearish signals"};
      return {false, dom == Dominance::Bullish ? "Sell against dominant Bullish signals"
                                               : "Sell without a dominant Bearish direction"};
    case DecisionAction::Hold:
      if (dom == Dominance::None) return {true, "Hold on neutral or mixed signals"};
      return {false, dom == Dominance::Bullish ? "Hold despite dominant Bullish signals"
                                               : "Hold despite dominant Bearish signals"};
  }
  return {false, "unknown action"};
}

std::string_view to_string(Effectiveness e) {
  switch (e) {
    case Effectiveness::Effective: return "effective";
    case Effectiveness::NotEffective: return "not effective";
    case Effectiveness::NotApplicable: return "not applicable";
  }
  return "not applicable";
}

Effectiveness classify_effectiveness(const Decision& decision, std::optional<Price> next_price) {
  if (decision.action == DecisionAction::Hold || decision.shares == 0 || !next_price) {
    return Effectiveness::NotApplicable;
  }
  const bool up = *next_price > decision.price;
  const bool down = *next_price < decision.price;
  if (decision.action == DecisionAction::Buy) return up ? Effectiveness::Effective : Effectiveness::NotEffective;
  return down ? Effectiveness::Effective : Effectiveness::NotEffective;
}

MarkBook MarkBook::from_entries(const std::vector<ledger::LedgerEntry>& entries) {
  MarkBook book;
  for (const auto& e : entries) {
    if (const auto* d = std::get_if<Decision>(&e.payload)) book.add(d->ticker, d->date, d->price);
  }
  return book;
}

void MarkBook::add(const Ticker& ticker, Date date, Price price) { marks_[ticker][date] = price; }

std::optional<Price> MarkBook::at(const Ticker& ticker, Date date) const {
  const auto t = marks_.find(ticker);
  if (t == marks_.end()) return std::nullopt;
  const auto it = t->second.find(date);
  if (it == t->second.end()) return std::nullopt;
  return it->second;
}

std::optional<Price> MarkBook::next_after(const Ticker& ticker, Date date) const {
  const auto t = marks_.find(ticker);
  if (t == marks_.end()) return std::nullopt;
  const auto it = t->second.upper_bound(date);
  if (it == t->second.end()) return std::nullopt;
  return it->second;
}

PriceMap MarkBook::prices_on(Date date) const {
  PriceMap out;
  for (const auto& [t, series] : marks_) {
    const auto it = series.find(date);
    if (it != series.end()) out[t] = it->second;
  }
  return out;
}

std::optional<Date> MarkBook::last_date() const {
  std::optional<Date> last;
  for (const auto& [t, series] : marks_) {
    if (!series.empty() && (!last || series.rbegin()->first > *last)) last = series.rbegin()->first;
  }
  return last;
}

std::optional<double> win_rate(const std::vector<TradeRecord>& trades, const MarkBook& marks, Date final_date) {
  std::size_t n = 0;
  std::size_t wins = 0;
  for (const auto& t : trades) {
    if (t.action == DecisionAction::Hold || t.executed_shares == 0 || t.date >= final_date) continue;
    const auto next = marks.next_after(t.ticker, t.date);
    if (!next) {
      raise(ErrorKind::MissingNextPrice, "no price after " + t.date.iso() + " for " + t.ticker.str());
    }
    const std::int64_t r = t.action == DecisionAction::Buy ? next->units() - t.price.units()
                                                           : t.price.units() - next->units();
    ++n;
    if (r > 0) ++wins;
  }
  if (n == 0) return std::nullopt;
  return static_cast<double>(wins) * 100.0 / static_cast<double>(n);
}

std::size_t Distributions::signal_total() const {
  std::size_t n = 0;
  for (const auto& [k, counts] : directions) n += counts[0] + counts[1] + counts[2];
  return n;
}

std::size_t Distributions::decision_total() const {
  std::size_t n = 0;
  for (const auto& [t, counts] : actions) n += counts[0] + counts[1] + counts[2];
  return n;
}

Distributions distributions(const std::vector<ledger::LedgerEntry>& entries) {
  Distributions d;
  for (const auto& e : entries) {
    if (const auto* s = std::get_if<Signal>(&e.payload)) {
      d.directions[s->analyst][static_cast<std::size_t>(s->direction)]++;
      if (!s->valid) d.invalid_signals[s->analyst]++;
    } else if (const auto* dec = std::get_if<Decision>(&e.payload)) {
      d.actions[dec->ticker][static_cast<std::size_t>(dec->action)]++;
      if (!dec->valid) d.invalid_decisions[dec->ticker]++;
    }
  }
  return d;
}

BehaviorSummary analyze_behavior(const std::vector<ledger::LedgerEntry>& entries, const MarkBook& marks) {
  BehaviorSummary out;
  std::map<std::pair<Date, Ticker>, std::vector<Signal>> signals;
  for (const auto& e : entries) {
    if (const auto* s = std::get_if<Signal>(&e.payload)) signals[{s->date, s->ticker}].push_back(*s);
  }
  const auto last = marks.last_date();
  for (const auto& e : entries) {
    const auto* d = std::get_if<Decision>(&e.payload);
    if (!d || !d->valid) continue;
    const auto verdict = classify_consistency(signals[{d->date, d->ticker}], *d);
    ++out.consistency_total;
    auto& by_action = out.consistency_by_action[d->action];
    ++by_action[1];
    if (verdict.consistent) {
      ++out.consistent;
      ++by_action[0];
    }
    std::optional<Price> next;
    if (last && d->date < *last) {
      next = marks.next_after(d->ticker, d->date);
      if (!next) raise(ErrorKind::MissingNextPrice, "no price after " + d->date.iso() + " for " + d->ticker.str());
    }
    const Effectiveness eff = classify_effectiveness(*d, next);
    if (eff == Effectiveness::NotApplicable) continue;
    ++out.effectiveness_applicable;
    if (eff == Effectiveness::Effective) ++out.effective;
  }
  return out;
}

}  // namespace livefund::metrics
