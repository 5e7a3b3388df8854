#include "livefund/metrics/report.hpp"

#include <spdlog/spdlog.h>

#include "livefund/domain/error.hpp"
#include "livefund/market/clock.hpp"

namespace livefund::metrics {

namespace {

template <typename Fn>
std::optional<double> optional_metric(MetricReport& report, std::string_view name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::ZeroVariance:
      case ErrorKind::InsufficientData:
      case ErrorKind::ZeroMarketVariance:
      case ErrorKind::MisalignedSeries:
      case ErrorKind::MissingPrice:
        report.notes.push_back(std::string(name) + ": " + e.what());
        spdlog::warn("{} {}: {}", report.run_id, name, e.what());
        return std::nullopt;
      default: throw;
    }
  }
}

}  // namespace

MetricReport evaluate_run(const std::string& run_id, const std::string& model,
                          const std::vector<ledger::LedgerEntry>& entries,
                          const std::optional<ReturnSeries>& market, const MetricParams& params) {
  MetricReport r;
  r.run_id = run_id;
  r.model = model;
  const auto snaps = ledger::snapshots_by_date(entries);
  if (snaps.empty()) raise(ErrorKind::EmptyRun, "run '" + run_id + "' has no portfolio snapshots");

  std::vector<ledger::ValuePoint> points;
  for (const auto& [date, snap] : snaps) points.push_back({date, snap.total_value});
  const ReturnSeries series = ReturnSeries::from_points(points);
  r.days = points.size();
  r.first_date = points.front().date;
  r.last_date = points.back().date;
  r.initial_value = points.front().value;
  r.final_value = points.back().value;

  r.cr = cumulative_return(r.initial_value, r.final_value);
  r.mdd = max_drawdown(series);
  r.sr = optional_metric(r, "sr", [&] { return sharpe_ratio(series, params); });

  const MarkBook marks = MarkBook::from_entries(entries);
  r.cr_bnh = optional_metric(r, "cr_bnh", [&] {
    return buy_and_hold_return(snaps.front().second.portfolio, marks.prices_on(r.first_date),
                               marks.prices_on(r.last_date));
  });

  std::vector<TradeRecord> trades;
  for (const auto& e : entries) {
    if (const auto* t = std::get_if<TradeRecord>(&e.payload)) {
      trades.push_back(*t);
      if (t->executed_shares > 0) ++r.trades_executed;
    }
  }
  r.wr = win_rate(trades, marks, r.last_date);
  if (!r.wr) r.notes.push_back("wr: no executed trade before the final day");

  if (market) {
    r.beta = optional_metric(r, "beta", [&] { return beta(series, *market); });
    r.alpha = optional_metric(r, "alpha", [&] { return alpha(series, *market, params); });
  } else {
    r.notes.push_back("beta/alpha: no benchmark series");
  }

  r.validity = validity_rates(entries);
  r.distributions = distributions(entries);
  r.behavior = analyze_behavior(entries, marks);
  return r;
}

ReturnSeries benchmark_series(const market::MarketGateway& gateway, const Ticker& benchmark,
                              const std::vector<Date>& dates) {
  if (dates.empty()) raise(ErrorKind::InvalidArgument, "no dates for the benchmark series");
  const auto clock = market::SimulationClock::replay(dates.back());
  const auto span = static_cast<std::size_t>(dates.back().days_since(dates.front())) + 2;
  const auto bars = gateway.fetch_ohlcv(benchmark, std::max<std::size_t>(span, 2), clock);
  std::map<Date, Price> closes;
  for (const auto& b : bars) closes[b.date] = b.close;
  ReturnSeries s;
  for (const Date d : dates) {
    const auto it = closes.find(d);
    if (it == closes.end()) {
      raise(ErrorKind::MisalignedSeries, "benchmark " + benchmark.str() + " has no close on " + d.iso());
    }
    s.dates.push_back(d);
    s.values.push_back(it->second.to_double());
  }
  s.validate();
  return s;
}

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json to_json(const MetricReport& r) {
  Json j;
  j["run_id"] = r.run_id;
  j["model"] = r.model;
  j["days"] = r.days;
  j["first_date"] = r.first_date;
  j["last_date"] = r.last_date;
  j["initial_value"] = r.initial_value;
  j["final_value"] = r.final_value;
  j["cr_pct"] = r.cr;
  j["cr_bnh_pct"] = opt(r.cr_bnh);
  j["sr"] = opt(r.sr);
  j["mdd_pct"] = r.mdd;
  j["wr_pct"] = opt(r.wr);
  j["beta"] = opt(r.beta);
  j["alpha"] = opt(r.alpha);
  j["trades_executed"] = r.trades_executed;
  j["validity"] = {{"signals", r.validity.signals},
                   {"valid_signals", r.validity.valid_signals},
                   {"signal_rate", r.validity.signal_rate()},
                   {"decisions", r.validity.decisions},
                   {"valid_decisions", r.validity.valid_decisions},
                   {"decision_rate", r.validity.decision_rate()}};

  Json dirs = Json::object();
  for (const auto& [kind, c] : r.distributions.directions) {
    const auto inv = r.distributions.invalid_signals.find(kind);
    dirs[std::string(to_string(kind))] = {{"Bullish", c[0]},
                                          {"Bearish", c[1]},
                                          {"Neutral", c[2]},
                                          {"invalid", inv == r.distributions.invalid_signals.end() ? 0 : inv->second}};
  }
  Json acts = Json::object();
  for (const auto& [ticker, c] : r.distributions.actions) {
    const auto inv = r.distributions.invalid_decisions.find(ticker);
    acts[ticker.str()] = {{"Buy", c[0]},
                          {"Sell", c[1]},
                          {"Hold", c[2]},
                          {"invalid", inv == r.distributions.invalid_decisions.end() ? 0 : inv->second}};
  }
  j["signal_directions"] = std::move(dirs);
  j["decision_actions"] = std::move(acts);

  Json by_action = Json::object();
  for (const auto& [action, c] : r.behavior.consistency_by_action) {
    by_action[std::string(to_string(action))] = {{"consistent", c[0]}, {"total", c[1]}};
  }
  j["behavior"] = {{"consistent", r.behavior.consistent},
                   {"consistency_total", r.behavior.consistency_total},
                   {"by_action", std::move(by_action)},
                   {"effective", r.behavior.effective},
                   {"effectiveness_applicable", r.behavior.effectiveness_applicable}};
  j["notes"] = r.notes;
  return j;
}

}  // namespace livefund::metrics
