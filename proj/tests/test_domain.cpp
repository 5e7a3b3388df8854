#include <doctest.h>

#include <random>

#include "livefund/domain/error.hpp"
#include "livefund/domain/serialization.hpp"
#include "support/check_kind.hpp"
#include "support/helpers.hpp"

using namespace livefund;
using livefund::testing::d;
using livefund::testing::tk;

TEST_CASE("ticker shape") {
  CHECK(Ticker::is_valid("AAPL"));
  CHECK(Ticker::is_valid("BRK.B"));
  CHECK(Ticker::is_valid("A"));
  CHECK_FALSE(Ticker::is_valid(""));
  CHECK_FALSE(Ticker::is_valid("aapl"));
  CHECK_FALSE(Ticker::is_valid("TOOLONG"));
  CHECK_FALSE(Ticker::is_valid("AB1"));
  CHECK_KIND(Ticker("x y"), ErrorKind::InvalidArgument);
}

TEST_CASE("direction and action parsing") {
  CHECK(parse_direction("Bullish") == SignalDirection::Bullish);
  CHECK(parse_direction("  neutral ") == SignalDirection::Neutral);
  CHECK_KIND(parse_direction("Sideways"), ErrorKind::UnrecognizedDirection);

  CHECK(parse_action("Buy") == DecisionAction::Buy);
  CHECK(parse_action("HOLD") == DecisionAction::Hold);
  CHECK_KIND(parse_action("short"), ErrorKind::UnrecognizedAction);

  CHECK(parse_analyst("Company News") == AnalystKind::CompanyNews);
  CHECK(parse_analyst("macro_economic") == AnalystKind::MacroEconomic);
  CHECK_KIND(parse_analyst("Sentiment"), ErrorKind::UnrecognizedAnalyst);

  for (auto dir : kAllDirections) CHECK(parse_direction(to_string(dir)) == dir);
  for (auto a : kAllActions) CHECK(parse_action(to_string(a)) == a);
  for (auto k : kAllAnalysts) CHECK(parse_analyst(to_string(k)) == k);
  CHECK(kAllAnalysts.size() == 6);
}

TEST_CASE("signal and decision invariants") {
  const auto fb = Signal::fallback(AnalystKind::Policy, tk("KO"), d("2025-04-01"));
  CHECK_FALSE(fb.valid);
  CHECK(fb.direction == SignalDirection::Neutral);
  CHECK(fb.justification == "No signal provided due to error");
  CHECK_KIND(Signal::make(AnalystKind::Policy, tk("KO"), d("2025-04-01"), SignalDirection::Bullish, ""),
             ErrorKind::InvalidArgument);

  const auto hold = Decision::fallback(tk("KO"), d("2025-04-01"), Price::parse("60.5"));
  CHECK_FALSE(hold.valid);
  CHECK(hold.action == DecisionAction::Hold);
  CHECK(hold.shares == 0);
  CHECK(hold.justification == "Just hold due to error");

  const Price p = Price::parse("10");
  CHECK_KIND(Decision::make(tk("KO"), d("2025-04-01"), DecisionAction::Hold, 3, p, "x"), ErrorKind::InvalidArgument);
  CHECK_KIND(Decision::make(tk("KO"), d("2025-04-01"), DecisionAction::Buy, 0, p, "x"), ErrorKind::InvalidArgument);
  CHECK_KIND(Decision::make(tk("KO"), d("2025-04-01"), DecisionAction::Sell, 1, Price{}, "x"),
             ErrorKind::InvalidArgument);
  CHECK(Decision::make(tk("KO"), d("2025-04-01"), DecisionAction::Sell, 1, p, "x").valid);
}

TEST_CASE("decision memory") {
  auto mk = [](int i) {
    return Decision::make(Ticker("CVX"), Date(2025, 3, 17).plus_days(i), DecisionAction::Hold, 0,
                          Price::parse("100"), "d" + std::to_string(i));
  };
  CHECK(push_decision_memory({}, mk(1), 5) == DecisionMemory{mk(1)});
  const DecisionMemory full{mk(5), mk(4), mk(3), mk(2), mk(1)};
  CHECK(push_decision_memory(full, mk(6), 5) == DecisionMemory{mk(6), mk(5), mk(4), mk(3), mk(2)});
  CHECK(push_decision_memory({mk(1)}, mk(2), 1) == DecisionMemory{mk(2)});
  CHECK(full.size() == 5);
  CHECK_KIND(push_decision_memory({}, mk(1), 0), ErrorKind::InvalidArgument);

  DecisionMemory m;
  for (int i = 0; i < 40; ++i) {
    m = push_decision_memory(m, mk(i), 5);
    CHECK(m.size() == std::min<std::size_t>(static_cast<std::size_t>(i) + 1, 5));
    CHECK(m.front() == mk(i));
  }
}

TEST_CASE("fixed-point money") {
  CHECK(Money::parse("4252.06").units() == 425206);
  CHECK(Money::parse("-3").units() == -300);
  CHECK(Price::parse("156.12").to_string() == "156.1200");
  CHECK(Money::from_double(0.125).units() == 13);
  CHECK(Money::from_double(-0.125).units() == -13);
  CHECK_THROWS(Money::parse("1.005"));
  CHECK_THROWS(Money::parse("abc"));

  CHECK(notional(184, Price::parse("156.12")) == Money::parse("28726.08"));
  CHECK(notional(3, Price::parse("0.3333")) == Money::parse("1.00"));
  CHECK(affordable_shares(Money::parse("1500"), Price::parse("150")) == 10);
  CHECK(affordable_shares(Money::parse("1499.99"), Price::parse("150")) == 9);
  CHECK(affordable_shares(Money{}, Price::parse("150")) == 0);
  CHECK(floor_shares(Money::parse("-4215.24"), Price::parse("156.12")) == -27);
  CHECK(floor_shares(Money::parse("-4215.23"), Price::parse("156.12")) == -27);
  CHECK(floor_shares(Money::parse("-4215.25"), Price::parse("156.12")) == -28);
  CHECK(floor_shares(Money::parse("20000"), Price::parse("200")) == 100);
  CHECK(to_price(Money::parse("1.23")) == Price::parse("1.23"));
}

TEST_CASE("floor_shares and affordable_shares agree with exact integer division") {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<std::int64_t> cents(-50'000'000, 50'000'000);
  std::uniform_int_distribution<std::int64_t> ticks(1, 5'000'000);
  for (int i = 0; i < 20000; ++i) {
    const auto m = Money::from_units(cents(gen));
    const auto p = Price::from_units(ticks(gen));
    // value / price in common units of 1e-4.
    const std::int64_t num = m.units() * 100;
    std::int64_t q = num / p.units();
    if (num % p.units() != 0 && num < 0) --q;
    CHECK(floor_shares(m, p) == q);
    if (!m.is_negative()) {
      const std::int64_t a = affordable_shares(m, p);
      CHECK(notional(a, p) <= m);
      CHECK(Money::from_units(((a + 1) * p.units() + 99) / 100) > m);
    }
  }
}

TEST_CASE("dates") {
  CHECK(Date::parse("2025-04-03").iso() == "2025-04-03");
  CHECK(Date::parse("2025-04-10T13:30:00") == d("2025-04-10"));
  CHECK(Date::parse("20250410T133000") == d("2025-04-10"));
  CHECK_FALSE(Date::try_parse("2025-02-30").has_value());
  CHECK_FALSE(Date::try_parse("yesterday").has_value());
  CHECK(d("2025-04-05").is_weekend());
  CHECK_FALSE(d("2025-04-04").is_weekend());
  CHECK(d("2025-04-17").days_since(d("2025-03-17")) == 31);
}

TEST_CASE("portfolio invariants") {
  auto p = Portfolio::with_cash(Money::parse("100"), d("2025-03-17"));
  CHECK_NOTHROW(p.check_invariants());
  p.positions[tk("KO")] = Position{tk("KO"), 0, Price::parse("1")};
  CHECK_KIND(p.check_invariants(), ErrorKind::InvalidArgument);
  p.positions[tk("KO")] = Position{tk("KO"), -1, Price{}};
  CHECK_KIND(p.check_invariants(), ErrorKind::InvalidArgument);
  p.positions[tk("KO")] = Position{tk("KO"), 5, Price::parse("60")};
  CHECK_NOTHROW(p.check_invariants());
  CHECK(p.shares_of(tk("KO")) == 5);
  CHECK(p.shares_of(tk("AAPL")) == 0);
  p.cash = Money::parse("-0.01");
  CHECK_KIND(p.check_invariants(), ErrorKind::InvalidArgument);
}

TEST_CASE("serialization round trips") {
  const auto s = Signal::make(AnalystKind::CompanyNews, tk("AAPL"), d("2025-04-09"), SignalDirection::Bearish,
                              "weak guidance");
  Json js = s;
  CHECK(js["direction"] == "Bearish");
  CHECK(js["analyst"] == "CompanyNews");
  CHECK(js.get<Signal>() == s);

  const auto dec = Decision::make(tk("CVX"), d("2025-04-03"), DecisionAction::Sell, 27, Price::parse("156.12"),
                                  "rebalance");
  Json jd = dec;
  CHECK(jd["action"] == "Sell");
  CHECK(jd.get<Decision>() == dec);

  auto p = Portfolio::with_cash(Money::parse("4252.06"), d("2025-04-03"));
  p.positions[tk("CVX")] = Position{tk("CVX"), 184, Price::parse("161.2345")};
  CHECK(Json(p).get<Portfolio>() == p);

  TradeRecord t{"run-1", d("2025-04-03"), tk("CVX"), DecisionAction::Sell, 27, 27, Price::parse("156.12"),
                Money::parse("8467.30"), 157, "rebalance"};
  CHECK(Json(t).get<TradeRecord>() == t);

  CHECK_THROWS(Json::parse(R"({"analyst":"Technical","ticker":"AAPL","date":"2025-04-09",
    "direction":"Up","justification":"x","valid":true})").get<Signal>());
}
