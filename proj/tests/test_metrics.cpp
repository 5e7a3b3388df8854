#include <doctest.h>

#include <algorithm>
#include <random>

#include "livefund/llm/scripted_stub.hpp"
#include "livefund/market/replay_provider.hpp"
#include "livefund/metrics/report.hpp"
#include "livefund/workflow/engine.hpp"
#include "support/check_kind.hpp"
#include "support/consistency_table.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace livefund;
using namespace livefund::metrics;
using livefund::testing::d;
using livefund::testing::sig;
using livefund::testing::tk;

namespace {

std::vector<double> random_series(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> step(0.0005, 0.015);
  std::vector<double> v{100000.0};
  while (v.size() < n) v.push_back(v.back() * std::exp(step(gen)));
  return v;
}

ReturnSeries rs(std::vector<double> v) { return ReturnSeries::from_values(std::move(v)); }

ledger::LedgerEntry entry(Date day, ledger::EntryPayload p) { return {0, "m", day, std::move(p)}; }

TradeRecord trade(const char* sym, Date day, DecisionAction a, std::int64_t n, const char* price) {
  return {"m", day, tk(sym), a, n, n, Price::parse(price), Money{}, 0, "x"};
}

}  // namespace

TEST_CASE("cumulative return") {
  CHECK(cumulative_return(Money::whole(100000), Money::whole(101100)) == 1.1);
  CHECK(oracle::close_to(cumulative_return(rs({100000, 100500, 101100})), 1.1, 1e-12));
  CHECK(cumulative_return(rs({100000})) == 0.0);
  CHECK(cumulative_return(rs({100, 50})) == -50.0);
  CHECK(cumulative_return(Money::whole(100), Money::whole(100)) == 0.0);

  std::mt19937_64 gen(41);
  for (int i = 0; i < 300; ++i) {
    auto v = random_series(gen, 2 + i % 40);
    const double cr = cumulative_return(rs(v));
    CHECK((cr > 0) == (v.back() > v.front()));
    for (double& x : v) x *= 3.7;
    CHECK(oracle::close_to(cumulative_return(rs(v)), cr, 1e-9));
  }
  CHECK_KIND(cumulative_return(rs({})), ErrorKind::InvalidArgument);
  CHECK_KIND(cumulative_return(rs({100, -1})), ErrorKind::InvalidArgument);
}

TEST_CASE("buy and hold") {
  const auto cash = Portfolio::with_cash(Money::whole(100000), d("2025-03-17"));
  CHECK(buy_and_hold_return(cash, {}, {}) == 0.0);

  auto half = Portfolio::with_cash(Money::whole(50000), d("2025-03-17"));
  half.positions[tk("KO")] = Position{tk("KO"), 1000, Price::parse("50")};
  const double cr = buy_and_hold_return(half, {{tk("KO"), Price::parse("50")}}, {{tk("KO"), Price::parse("45")}});
  CHECK(oracle::close_to(cr, 0.5 * -10.0, 1e-12));
  CHECK_KIND(buy_and_hold_return(half, {{tk("KO"), Price::parse("50")}}, {}), ErrorKind::MissingPrice);
}

TEST_CASE("sharpe ratio") {
  CHECK_KIND(sharpe_ratio(rs({100, 100, 100, 100})), ErrorKind::ZeroVariance);
  CHECK_KIND(sharpe_ratio(rs({100, 101})), ErrorKind::InsufficientData);
  std::mt19937_64 gen(42);
  for (int i = 0; i < 500; ++i) {
    auto v = random_series(gen, i == 0 ? 24 : 3 + i % 60);
    const double got = sharpe_ratio(rs(v));
    CHECK(oracle::close_to(got, oracle::sharpe(v), 1e-9));
    for (double& x : v) x *= 2.0;
    CHECK(oracle::close_to(sharpe_ratio(rs(v)), got, 1e-9));
  }
  MetricParams zero_rf;
  zero_rf.risk_free_annual = 0.0;
  const std::vector<double> v{100, 110, 99, 120};
  CHECK(oracle::close_to(sharpe_ratio(rs(v), zero_rf), oracle::sharpe(v, 0.0), 1e-12));
}

TEST_CASE("max drawdown") {
  CHECK(max_drawdown(rs({100, 90, 95})) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(max_drawdown(rs({100, 100, 101, 150})) == 0.0);
  CHECK(max_drawdown(rs({100})) == 0.0);
  CHECK(max_drawdown(rs({100, 120, 60, 130, 65})) == doctest::Approx(50.0).epsilon(1e-12));
  std::mt19937_64 gen(43);
  for (int i = 0; i < 1000; ++i) {
    const auto v = random_series(gen, 1 + i % 200);
    const double got = max_drawdown(rs(v));
    CHECK(oracle::close_to(got, oracle::max_drawdown(v), 1e-9));
    CHECK(got >= 0.0);
    CHECK((got == 0.0) == std::is_sorted(v.begin(), v.end()));
  }
}

TEST_CASE("win rate") {
  MarkBook marks;
  for (const auto& [sym, day, p] : std::vector<std::tuple<const char*, const char*, const char*>>{
           {"AAPL", "2025-04-01", "150"},   {"AAPL", "2025-04-02", "151"},   {"AAPL", "2025-04-03", "149"},
           {"CVX", "2025-04-03", "156.12"}, {"CVX", "2025-04-04", "150"},    {"CVX", "2025-04-07", "150.5"}}) {
    marks.add(tk(sym), d(day), Price::parse(p));
  }
  CHECK(marks.next_after(tk("CVX"), d("2025-04-04")) == Price::parse("150.5"));
  CHECK_FALSE(marks.next_after(tk("CVX"), d("2025-04-07")).has_value());

  const auto buy_win = trade("AAPL", d("2025-04-01"), DecisionAction::Buy, 10, "150");
  const auto sell_win = trade("CVX", d("2025-04-03"), DecisionAction::Sell, 27, "156.12");
  const auto buy_loss = trade("AAPL", d("2025-04-02"), DecisionAction::Buy, 1, "151");
  const auto sell_loss = trade("CVX", d("2025-04-04"), DecisionAction::Sell, 1, "150");
  const auto final_day = trade("CVX", d("2025-04-07"), DecisionAction::Buy, 1, "150.5");
  CHECK(win_rate({buy_win}, marks, d("2025-04-07")) == 100.0);
  CHECK(win_rate({sell_win}, marks, d("2025-04-07")) == 100.0);
  CHECK(win_rate({buy_win, sell_win, buy_loss, sell_loss, final_day}, marks, d("2025-04-07")) == 50.0);

  auto hold = trade("AAPL", d("2025-04-01"), DecisionAction::Hold, 0, "150");
  CHECK_FALSE(win_rate({hold, final_day}, marks, d("2025-04-07")).has_value());
  CHECK_FALSE(win_rate({}, marks, d("2025-04-07")).has_value());
  const auto orphan = trade("KO", d("2025-04-01"), DecisionAction::Buy, 1, "60");
  CHECK_KIND(win_rate({orphan}, marks, d("2025-04-07")), ErrorKind::MissingNextPrice);
}

TEST_CASE("beta and alpha") {
  const std::vector<double> m{100, 102, 101, 105, 103};
  CHECK(beta(rs(m), rs(m)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(alpha(rs(m), rs(m)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  std::vector<double> steady{100};
  for (int i = 0; i < 4; ++i) steady.push_back(steady.back() * 1.01);
  CHECK(std::fabs(beta(rs(steady), rs(m))) < 1e-12);

  // Beta zero and a return equal to the risk-free leg.
  MetricParams p;
  std::vector<double> rf_path{100};
  const double per = p.risk_free_annual / p.periods_per_year;
  for (int i = 0; i < 4; ++i) rf_path.push_back(rf_path.back() * (1.0 + per));
  const double r_f = p.risk_free_annual * 4 / p.periods_per_year;
  const double r_s = rf_path.back() / rf_path.front() - 1.0;
  CHECK(std::fabs(alpha(rs(rf_path), rs(m)) - (r_s - r_f)) < 1e-12);
  CHECK(std::fabs(r_s - r_f) < 1e-5);

  CHECK_KIND(beta(rs({100, 101, 102}), rs({100, 100, 100})), ErrorKind::ZeroMarketVariance);
  CHECK_KIND(beta(rs({100, 101}), rs({100, 102})), ErrorKind::InsufficientData);
  auto shifted = rs(m);
  shifted.dates.back() = shifted.dates.back().plus_days(1);
  CHECK_KIND(beta(rs(m), shifted), ErrorKind::MisalignedSeries);
  CHECK_KIND(beta(rs(m), rs({100, 101, 102})), ErrorKind::MisalignedSeries);

  std::mt19937_64 gen(44);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 3 + i % 60;
    const auto s = random_series(gen, n);
    const auto mk = random_series(gen, n);
    const double b = beta(rs(s), rs(mk));
    CHECK(oracle::close_to(b, oracle::beta(s, mk), 1e-9));
    CHECK(oracle::close_to(alpha(rs(s), rs(mk)), oracle::alpha(s, mk), 1e-9));

    // Scaling market returns by c scales beta by 1/c.
    const double c = 0.5 + static_cast<double>(i % 7) * 0.25;
    std::vector<double> scaled{mk.front()};
    for (std::size_t t = 1; t < n; ++t) scaled.push_back(scaled.back() * (1.0 + c * (mk[t] / mk[t - 1] - 1.0)));
    CHECK(oracle::close_to(beta(rs(s), rs(scaled)), b / c, 1e-9));
  }
}

TEST_CASE("validity rates") {
  std::vector<ledger::LedgerEntry> entries;
  for (int i = 0; i < 4320; ++i) {
    entries.push_back(entry(d("2025-03-17"), sig(SignalDirection::Bullish, AnalystKind::Insider, i < 4144)));
  }
  for (int i = 0; i < 1080; ++i) {
    entries.push_back(entry(d("2025-03-17"), i < 1059 ? Decision::make(tk("KO"), d("2025-03-17"), DecisionAction::Hold, 0,
                                                                       Price::parse("60"), "wait")
                                                     : Decision::fallback(tk("KO"), d("2025-03-17"), Price::parse("60"))));
  }
  const auto v = validity_rates(entries);
  CHECK(v.signals == 4320);
  CHECK(v.valid_signals == 4144);
  CHECK(v.signal_rate() == 4144.0 / 4320.0);
  CHECK(std::round(v.signal_rate() * 100) == 96);
  CHECK(std::round(v.decision_rate() * 100) == 98);
  const auto none = validity_rates({});
  CHECK(none.signal_rate() == 1.0);
  CHECK(none.decision_rate() == 1.0);
}

TEST_CASE("consistency golden table") {
  for (const auto& c : livefund::testing::kConsistencyTable) {
    const auto signals = livefund::testing::signals_for(c);
    const auto verdict = classify_consistency(signals, livefund::testing::decision_for(c));
    CHECK_MESSAGE(verdict.consistent == c.consistent, c.bullish, "/", c.bearish, "/", c.neutral, "/", c.invalid, " ",
                  to_string(c.action), ": ", verdict.reason);
    CHECK_FALSE(verdict.reason.empty());
  }
  CHECK(dominant_direction({}) == Dominance::None);
  CHECK(dominant_direction({sig(SignalDirection::Bearish), sig(SignalDirection::Bearish), sig(SignalDirection::Bullish)}) ==
        Dominance::Bearish);
}

TEST_CASE("consistency ignores order") {
  std::mt19937_64 gen(45);
  for (int i = 0; i < 500; ++i) {
    std::vector<Signal> signals;
    const int n = static_cast<int>(gen() % 9);
    for (int k = 0; k < n; ++k) {
      signals.push_back(sig(kAllDirections[gen() % 3], AnalystKind::Technical, gen() % 6 != 0));
    }
    const auto action = static_cast<DecisionAction>(gen() % 3);
    const auto dec = Decision::make(tk("KO"), d("2025-04-01"), action, action == DecisionAction::Hold ? 0 : 1,
                                    Price::parse("60"), "x");
    const bool base = classify_consistency(signals, dec).consistent;
    for (int k = 0; k < 5; ++k) {
      std::shuffle(signals.begin(), signals.end(), gen);
      CHECK(classify_consistency(signals, dec).consistent == base);
    }
  }
}

TEST_CASE("effectiveness") {
  const auto buy = Decision::make(tk("AAPL"), d("2025-04-08"), DecisionAction::Buy, 5, Price::parse("172.42"), "x");
  CHECK(classify_effectiveness(buy, Price::parse("198.85")) == Effectiveness::Effective);
  CHECK(classify_effectiveness(buy, Price::parse("170")) == Effectiveness::NotEffective);
  const auto sell = Decision::make(tk("CVX"), d("2025-04-03"), DecisionAction::Sell, 27, Price::parse("156.12"), "x");
  CHECK(classify_effectiveness(sell, Price::parse("156.12")) == Effectiveness::NotEffective);
  CHECK(classify_effectiveness(sell, Price::parse("150")) == Effectiveness::Effective);
  const auto hold = Decision::make(tk("CVX"), d("2025-04-03"), DecisionAction::Hold, 0, Price::parse("156.12"), "x");
  CHECK(classify_effectiveness(hold, Price::parse("150")) == Effectiveness::NotApplicable);
  CHECK(classify_effectiveness(buy, std::nullopt) == Effectiveness::NotApplicable);
}

TEST_CASE("distributions conserve counts") {
  const auto empty = distributions({});
  CHECK(empty.signal_total() == 0);
  CHECK(empty.decision_total() == 0);

  std::mt19937_64 gen(46);
  std::vector<ledger::LedgerEntry> entries;
  std::size_t sigs = 0, decs = 0;
  for (int i = 0; i < 3000; ++i) {
    if (gen() % 3) {
      entries.push_back(entry(d("2025-03-17"), sig(kAllDirections[gen() % 3], kAllAnalysts[gen() % 6], gen() % 10 != 0)));
      ++sigs;
    } else {
      const auto a = static_cast<DecisionAction>(gen() % 3);
      entries.push_back(entry(d("2025-03-17"), gen() % 10 == 0 ? Decision::fallback(tk("BAC"), d("2025-03-17"), Price::parse("40"))
                                                            : Decision::make(tk("KO"), d("2025-03-17"), a,
                                                                             a == DecisionAction::Hold ? 0 : 3,
                                                                             Price::parse("60"), "x")));
      ++decs;
    }
  }
  const auto dist = distributions(entries);
  const auto v = validity_rates(entries);
  CHECK(dist.signal_total() == sigs);
  CHECK(dist.decision_total() == decs);
  CHECK(dist.signal_total() == v.signals);
  CHECK(dist.decision_total() == v.decisions);
  std::size_t invalid = 0;
  for (const auto& [k, n] : dist.invalid_signals) invalid += n;
  CHECK(invalid == v.signals - v.valid_signals);
  CHECK(dist.actions.at(tk("BAC"))[2] == dist.invalid_decisions.at(tk("BAC")));
}

TEST_CASE("evaluating a stub run") {
  const market::MarketGateway g(std::make_shared<market::ReplayProvider>(livefund::testing::bundled_fixtures()));
  llm::LlmGateway llm;
  llm.register_provider("stub", std::make_shared<llm::ScriptedStub>(std::vector<llm::ScriptEntry>{},
                                                                      llm::StubOptions{llm::StubDefault::Follow}));
  workflow::RunConfig c;
  c.run_id = "eval";
  c.universe = {tk("AAPL"), tk("AXP"), tk("BAC"), tk("KO"), tk("CVX")};
  c.start_date = d("2025-03-17");
  c.end_date = d("2025-04-17");
  c.analyst_set = {AnalystKind::Technical, AnalystKind::CompanyNews, AnalystKind::Policy, AnalystKind::Insider};
  c.model = {"stub", "scripted", 0.5, 3, std::chrono::seconds{60}};
  livefund::testing::TempDir dir;
  ledger::Ledger l(dir.path());
  l.register_run("eval");
  workflow::run_period(c, {g, llm, l});
  const auto entries = l.load_run("eval");
  const auto points = l.daily_value_series("eval");
  const auto series = ReturnSeries::from_points(points);
  const auto spx = benchmark_series(g, tk("SPX"), series.dates);
  const auto report = evaluate_run("eval", "stub", entries, spx);

  CHECK(report.days == 24);
  CHECK(report.initial_value == Money::whole(100000));
  CHECK(report.cr == cumulative_return(points.front().value, points.back().value));
  CHECK(report.mdd >= 0.0);
  CHECK(report.cr_bnh.has_value());
  CHECK(report.sr.has_value());
  CHECK(report.beta.has_value());
  CHECK(report.alpha.has_value());
  CHECK(report.validity.signals == 480);
  CHECK(report.validity.decisions == 120);
  CHECK(report.distributions.signal_total() == 480);
  if (report.wr) CHECK((*report.wr >= 0.0 && *report.wr <= 100.0));
  CHECK(report.behavior.consistent <= report.behavior.consistency_total);

  const auto no_market = evaluate_run("eval", "stub", entries, std::nullopt);
  CHECK_FALSE(no_market.beta.has_value());
  CHECK_FALSE(no_market.notes.empty());
  const Json j = to_json(report);
  CHECK(j["cr_pct"] == report.cr);
  CHECK(j["days"] == 24);
  CHECK_KIND(evaluate_run("x", "stub", {}, std::nullopt), ErrorKind::EmptyRun);
  CHECK_KIND(benchmark_series(g, tk("SPX"), {d("2025-04-05")}), ErrorKind::MisalignedSeries);
}
