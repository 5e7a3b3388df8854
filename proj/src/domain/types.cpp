#include "livefund/domain/types.hpp"

#include <algorithm>
#include <cctype>

#include "livefund/domain/error.hpp"

namespace livefund {

namespace {

std::string fold(std::string_view text, bool drop_separators) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (drop_separators && (c == ' ' || c == '_' || c == '-')) continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

template <typename Enum, std::size_t N>
bool match(std::string_view text, const std::array<Enum, N>& variants, bool drop_separators,
           Enum& out) {
  const std::string folded = fold(text, drop_separators);
  for (Enum v : variants) {
    if (fold(to_string(v), drop_separators) == folded) {
      out = v;
      return true;
    }
  }
  return false;
}

}  // namespace

Ticker::Ticker(std::string_view symbol) : symbol_(symbol) {
  if (!is_valid(symbol)) raise(ErrorKind::InvalidArgument, "invalid ticker '" + symbol_ + "'");
}

bool Ticker::is_valid(std::string_view symbol) {
  if (symbol.empty() || symbol.size() > 6) return false;
  return std::all_of(symbol.begin(), symbol.end(),
                     [](char c) { return (c >= 'A' && c <= 'Z') || c == '.'; });
}

std::string_view to_string(SignalDirection d) {
  switch (d) {
    case SignalDirection::Bullish: return "Bullish";
    case SignalDirection::Bearish: return "Bearish";
    case SignalDirection::Neutral: return "Neutral";
  }
  return "Neutral";
}

std::string_view to_string(DecisionAction a) {
  switch (a) {
    case DecisionAction::Buy: return "Buy";
    case DecisionAction::Sell: return "Sell";
    case DecisionAction::Hold: return "Hold";
  }
  return "Hold";
}

std::string_view to_string(AnalystKind k) {
  switch (k) {
    case AnalystKind::Technical: return "Technical";
    case AnalystKind::Fundamental: return "Fundamental";
    case AnalystKind::Insider: return "Insider";
    case AnalystKind::CompanyNews: return "CompanyNews";
    case AnalystKind::MacroEconomic: return "MacroEconomic";
    case AnalystKind::Policy: return "Policy";
  }
  return "Technical";
}

SignalDirection parse_direction(std::string_view text) {
  SignalDirection d{};
  if (!match(text, kAllDirections, false, d)) {
    raise(ErrorKind::UnrecognizedDirection, "unrecognized signal '" + std::string(text) + "'");
  }
  return d;
}

DecisionAction parse_action(std::string_view text) {
  DecisionAction a{};
  if (!match(text, kAllActions, false, a)) {
    raise(ErrorKind::UnrecognizedAction, "unrecognized action '" + std::string(text) + "'");
  }
  return a;
}

AnalystKind parse_analyst(std::string_view text) {
  AnalystKind k{};
  if (!match(text, kAllAnalysts, true, k)) {
    raise(ErrorKind::UnrecognizedAnalyst, "unrecognized analyst '" + std::string(text) + "'");
  }
  return k;
}

Signal Signal::make(AnalystKind analyst, Ticker ticker, Date date, SignalDirection direction,
                    std::string justification) {
  if (justification.empty()) raise(ErrorKind::InvalidArgument, "valid signal needs a justification");
  return Signal{analyst, std::move(ticker), date, direction, std::move(justification), true};
}

Signal Signal::fallback(AnalystKind analyst, Ticker ticker, Date date) {
  return Signal{analyst, std::move(ticker), date, SignalDirection::Neutral,
                std::string(kSignalErrorSentinel), false};
}

Decision Decision::make(Ticker ticker, Date date, DecisionAction action, std::int64_t shares,
                        Price price, std::string justification) {
  if (!price.is_positive()) raise(ErrorKind::InvalidArgument, "decision price must be positive");
  if (action == DecisionAction::Hold && shares != 0) {
    raise(ErrorKind::InvalidArgument, "Hold decision must carry zero shares");
  }
  if (action != DecisionAction::Hold && shares < 1) {
    raise(ErrorKind::InvalidArgument, "Buy/Sell decision needs at least one share");
  }
  return Decision{std::move(ticker), date, action, shares, price, std::move(justification), true};
}

Decision Decision::fallback(Ticker ticker, Date date, Price price) {
  return Decision{std::move(ticker), date, DecisionAction::Hold, 0, price,
                  std::string(kDecisionErrorSentinel), false};
}

Portfolio Portfolio::with_cash(Money cash, Date as_of) {
  Portfolio p;
  p.cash = cash;
  p.as_of = as_of;
  return p;
}

std::int64_t Portfolio::shares_of(const Ticker& t) const {
  const auto it = positions.find(t);
  return it == positions.end() ? 0 : it->second.shares;
}

void Portfolio::check_invariants() const {
  if (cash.is_negative()) raise(ErrorKind::InvalidArgument, "negative cash " + cash.to_string());
  for (const auto& [ticker, pos] : positions) {
    if (pos.ticker != ticker) raise(ErrorKind::InvalidArgument, "position keyed under wrong ticker");
    if (pos.shares < 0) raise(ErrorKind::InvalidArgument, "negative shares for " + ticker.str());
    if (pos.cost_basis.is_negative()) {
      raise(ErrorKind::InvalidArgument, "negative cost basis for " + ticker.str());
    }
    if (pos.shares == 0 && !pos.cost_basis.is_zero()) {
      raise(ErrorKind::InvalidArgument, "flat position with nonzero cost basis: " + ticker.str());
    }
  }
}

DecisionMemory push_decision_memory(const DecisionMemory& memory, const Decision& d,
                                    std::size_t capacity) {
  if (capacity == 0) raise(ErrorKind::InvalidArgument, "decision memory capacity must be >= 1");
  DecisionMemory out;
  out.reserve(std::min(capacity, memory.size() + 1));
  out.push_back(d);
  for (const auto& prior : memory) {
    if (out.size() == capacity) break;
    out.push_back(prior);
  }
  return out;
}

}  // namespace livefund
