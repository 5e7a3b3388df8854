#include "livefund/domain/serialization.hpp"

#include "livefund/domain/error.hpp"

namespace livefund {

void to_json(Json& j, const Ticker& t) { j = t.str(); }
void from_json(const Json& j, Ticker& t) { t = Ticker(j.get<std::string>()); }
void to_json(Json& j, const Date& d) { j = d.iso(); }
void from_json(const Json& j, Date& d) { d = Date::parse(j.get<std::string>()); }

void to_json(Json& j, SignalDirection d) { j = std::string(to_string(d)); }
void from_json(const Json& j, SignalDirection& d) { d = parse_direction(j.get<std::string>()); }
void to_json(Json& j, DecisionAction a) { j = std::string(to_string(a)); }
void from_json(const Json& j, DecisionAction& a) { a = parse_action(j.get<std::string>()); }
void to_json(Json& j, AnalystKind k) { j = std::string(to_string(k)); }
void from_json(const Json& j, AnalystKind& k) { k = parse_analyst(j.get<std::string>()); }

void to_json(Json& j, const Signal& s) {
  j = Json{{"analyst", s.analyst},           {"ticker", s.ticker}, {"date", s.date},
           {"direction", s.direction},       {"justification", s.justification},
           {"valid", s.valid}};
}

void from_json(const Json& j, Signal& s) {
  const auto analyst = j.at("analyst").get<AnalystKind>();
  const auto ticker = j.at("ticker").get<Ticker>();
  const auto date = j.at("date").get<Date>();
  if (j.at("valid").get<bool>()) {
    s = Signal::make(analyst, ticker, date, j.at("direction").get<SignalDirection>(),
                     j.at("justification").get<std::string>());
    return;
  }
  s = Signal::fallback(analyst, ticker, date);
  if (j.at("direction").get<SignalDirection>() != s.direction ||
      j.at("justification").get<std::string>() != s.justification) {
    raise(ErrorKind::InvalidArgument, "invalid signal without the error sentinel");
  }
}

void to_json(Json& j, const Decision& d) {
  j = Json{{"ticker", d.ticker}, {"date", d.date},   {"action", d.action},
           {"shares", d.shares}, {"price", d.price}, {"justification", d.justification},
           {"valid", d.valid}};
}

void from_json(const Json& j, Decision& d) {
  const auto ticker = j.at("ticker").get<Ticker>();
  const auto date = j.at("date").get<Date>();
  const auto price = j.at("price").get<Price>();
  if (j.at("valid").get<bool>()) {
    d = Decision::make(ticker, date, j.at("action").get<DecisionAction>(),
                       j.at("shares").get<std::int64_t>(), price,
                       j.at("justification").get<std::string>());
    return;
  }
  d = Decision::fallback(ticker, date, price);
  if (j.at("action").get<DecisionAction>() != d.action || j.at("shares").get<std::int64_t>() != 0 ||
      j.at("justification").get<std::string>() != d.justification) {
    raise(ErrorKind::InvalidArgument, "invalid decision without the error sentinel");
  }
}

void to_json(Json& j, const Position& p) {
  j = Json{{"ticker", p.ticker}, {"shares", p.shares}, {"cost_basis", p.cost_basis}};
}

void from_json(const Json& j, Position& p) {
  p.ticker = j.at("ticker").get<Ticker>();
  p.shares = j.at("shares").get<std::int64_t>();
  p.cost_basis = j.at("cost_basis").get<Price>();
}

void to_json(Json& j, const Portfolio& p) {
  Json positions = Json::object();
  for (const auto& [ticker, pos] : p.positions) positions[ticker.str()] = pos;
  j = Json{{"cash", p.cash}, {"positions", std::move(positions)}, {"as_of", p.as_of}};
}

void from_json(const Json& j, Portfolio& p) {
  p.cash = j.at("cash").get<Money>();
  p.as_of = j.at("as_of").get<Date>();
  p.positions.clear();
  for (const auto& [key, value] : j.at("positions").items()) {
    auto pos = value.get<Position>();
    if (pos.ticker.str() != key) raise(ErrorKind::InvalidArgument, "position key mismatch: " + key);
    p.positions.emplace(pos.ticker, pos);
  }
  p.check_invariants();
}

void to_json(Json& j, const TradeRecord& t) {
  j = Json{{"run_id", t.run_id},
           {"date", t.date},
           {"ticker", t.ticker},
           {"action", t.action},
           {"requested_shares", t.requested_shares},
           {"executed_shares", t.executed_shares},
           {"price", t.price},
           {"cash_after", t.cash_after},
           {"shares_after", t.shares_after},
           {"justification", t.justification}};
}

void from_json(const Json& j, TradeRecord& t) {
  t.run_id = j.at("run_id").get<std::string>();
  t.date = j.at("date").get<Date>();
  t.ticker = j.at("ticker").get<Ticker>();
  t.action = j.at("action").get<DecisionAction>();
  t.requested_shares = j.at("requested_shares").get<std::int64_t>();
  t.executed_shares = j.at("executed_shares").get<std::int64_t>();
  t.price = j.at("price").get<Price>();
  t.cash_after = j.at("cash_after").get<Money>();
  t.shares_after = j.at("shares_after").get<std::int64_t>();
  t.justification = j.at("justification").get<std::string>();
  if (t.executed_shares < 0 || t.executed_shares > t.requested_shares || t.cash_after.is_negative()) {
    raise(ErrorKind::InvalidArgument, "trade record violates execution bounds");
  }
}

}  // namespace livefund
