// Prints one PASS/FAIL line per acceptance criterion. Exit status is the
// number of failures (0 when everything passes).

#include <fmt/core.h>
#include <spdlog/sinks/null_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include "livefund/app/commands.hpp"
#include "livefund/app/config.hpp"
#include "livefund/app/leaderboard.hpp"
#include "livefund/ledger/ledger.hpp"
#include "livefund/llm/scripted_stub.hpp"
#include "livefund/market/replay_provider.hpp"
#include "livefund/metrics/report.hpp"
#include "livefund/workflow/engine.hpp"
#include "support/consistency_table.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace livefund;
using livefund::testing::bundled_fixtures;
using livefund::testing::read_file;
using livefund::testing::read_lines;
using livefund::testing::source_dir;
using livefund::testing::TempDir;
using livefund::testing::write_lines;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path config_path(const char* name) { return source_dir() / "configs" / name; }

int cli(const std::vector<std::string>& args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = app::run_cli(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

int run_config(const char* name, const fs::path& out, const std::optional<fs::path>& fixtures = std::nullopt) {
  std::vector<std::string> args{"run", "--config", config_path(name).string(), "--out", out.string()};
  if (fixtures) {
    args.push_back("--fixtures");
    args.push_back(fixtures->string());
  }
  return cli(args);
}

/// Engine run with the collaborators cmd_run would build, minus the CLI.
std::vector<ledger::LedgerEntry> engine_run(const app::AppConfig& cfg, const fs::path& out) {
  const market::MarketGateway g(std::make_shared<market::ReplayProvider>(cfg.data.fixture_dir));
  llm::LlmGateway llm;
  app::register_chat_providers(cfg, llm);
  llm.set_sleeper([](std::chrono::milliseconds) {});
  ledger::Ledger l(out);
  l.register_run(cfg.run.run_id);
  workflow::run_period(cfg.run, {g, llm, l});
  return l.load_run(cfg.run.run_id);
}

template <typename T>
std::vector<T> payloads(const std::vector<ledger::LedgerEntry>& entries) {
  std::vector<T> out;
  for (const auto& e : entries) {
    if (const auto* p = std::get_if<T>(&e.payload)) out.push_back(*p);
  }
  return out;
}

Outcome metric_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(2025);
  std::uniform_int_distribution<std::size_t> len(2, 200);
  std::normal_distribution<double> step(0.0003, 0.02);
  auto series = [&](std::size_t n) {
    std::vector<double> v{100000.0};
    while (v.size() < n) v.push_back(v.back() * std::exp(step(gen)));
    return v;
  };
  std::size_t bad = 0, checked = 0;
  double worst = 0.0;
  auto note = [&](double got, double want) {
    ++checked;
    const double rel = std::fabs(got - want) / std::max(1.0, std::fabs(want));
    worst = std::max(worst, rel);
    if (!oracle::close_to(got, want, 1e-9)) ++bad;
  };
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = len(gen);
    const auto s = series(n);
    const auto m = series(n);
    const auto rs = metrics::ReturnSeries::from_values(s);
    const auto rm = metrics::ReturnSeries::from_values(m);
    note(metrics::max_drawdown(rs), oracle::max_drawdown(s));
    if (n >= 3) {
      note(metrics::sharpe_ratio(rs), oracle::sharpe(s));
      note(metrics::beta(rs, rm), oracle::beta(s, m));
      note(metrics::alpha(rs, rm), oracle::alpha(s, m));
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 10.0,
          fmt::format("{} comparisons, {} outside 1e-9, worst rel err {:.2e}, {:.2f}s", checked, bad, worst, secs)};
}

Outcome cr_anchor() {
  const double exact = metrics::cumulative_return(Money::whole(100000), Money::whole(101100));
  metrics::MetricReport r;
  r.model = "anchor";
  r.cr = exact;
  const std::string row = app::leaderboard_row(r);
  const auto comma = row.find(',');
  const std::string cell = row.substr(comma + 1, row.find(',', comma + 1) - comma - 1);
  const double single = metrics::cumulative_return(metrics::ReturnSeries::from_values({100000.0}));
  return {exact == 1.1 && cell == "+1.10" && single == 0.0,
          fmt::format("CR={} rendered {} ; single point CR={}", exact, cell, single)};
}

Outcome cardinality(const fs::path& out) {
  if (const int code = run_config("stub_follow.toml", out); code != 0) return {false, fmt::format("run exit {}", code)};
  const auto entries = ledger::Ledger(out).load_run("stub-follow");
  const auto s = payloads<Signal>(entries).size();
  const auto d = payloads<Decision>(entries).size();
  return {s == 480 && d == 120, fmt::format("{} signals, {} decisions", s, d)};
}

Outcome validity(const fs::path& out) {
  auto cfg = app::load_config(config_path("stub_flaky.toml"));
  std::size_t sig = 0, sig_ok = 0, dec = 0, dec_ok = 0, bad_sentinel = 0;
  for (std::uint64_t seed = 1; seed <= 9; ++seed) {
    cfg.run.run_id = fmt::format("flaky-{}", seed);
    cfg.providers.at("stub").stub.seed = seed;
    const auto entries = engine_run(cfg, out);
    for (const auto& s : payloads<Signal>(entries)) {
      ++sig;
      sig_ok += s.valid;
      if (s.valid == (s.justification == kSignalErrorSentinel)) ++bad_sentinel;
    }
    for (const auto& d : payloads<Decision>(entries)) {
      ++dec;
      dec_ok += d.valid;
      if (d.valid == (d.justification == kDecisionErrorSentinel)) ++bad_sentinel;
    }
  }
  const double sr = 100.0 * static_cast<double>(sig_ok) / static_cast<double>(sig);
  const double dr = 100.0 * static_cast<double>(dec_ok) / static_cast<double>(dec);
  const bool pass = sig >= 4320 && std::fabs(sr - 96.0) <= 1.0 && std::fabs(dr - 98.0) <= 1.5 && bad_sentinel == 0;
  return {pass, fmt::format("signals {}/{} = {:.2f}%, decisions {}/{} = {:.2f}%, sentinel mismatches {}", sig_ok,
                            sig, sr, dec_ok, dec, dr, bad_sentinel)};
}

Outcome determinism(const fs::path& out) {
  // Failures and retries in the mix; one thread against one per call.
  auto cfg = app::load_config(config_path("stub_flaky.toml"));
  cfg.run.parallelism = 1;
  engine_run(cfg, out / "serial");
  cfg.run.parallelism = 64;
  engine_run(cfg, out / "wide");
  const std::string a = read_file(ledger::Ledger(out / "serial").run_file(cfg.run.run_id));
  const std::string b = read_file(ledger::Ledger(out / "wide").run_file(cfg.run.run_id));

  if (const int code = run_config("stub_follow.toml", out / "cli1"); code != 0) return {false, "cli run failed"};
  if (const int code = run_config("stub_follow.toml", out / "cli2"); code != 0) return {false, "cli run failed"};
  const std::string c = read_file(ledger::Ledger(out / "cli1").run_file("stub-follow"));
  const std::string d = read_file(ledger::Ledger(out / "cli2").run_file("stub-follow"));
  return {!a.empty() && a == b && !c.empty() && c == d,
          fmt::format("parallelism 1 vs 64: {} bytes {}; two CLI runs: {} bytes {}", a.size(),
                      a == b ? "identical" : "DIFFER", c.size(), c == d ? "identical" : "DIFFER")};
}

/// Copies the bundled fixtures and puts one record dated after the period
/// inside the window every fetch of that stream delivers.
fs::path poisoned_fixtures(const fs::path& root, const std::string& relative, const char* date_field) {
  fs::create_directories(root);
  fs::copy(bundled_fixtures(), root, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
  const fs::path file = root / relative;
  auto lines = read_lines(file);
  const Date first_day(2025, 3, 17);
  std::size_t at = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Date::parse(Json::parse(lines[i])[date_field].get<std::string>()) <= first_day) at = i;
  }
  Json rec = Json::parse(lines[at]);
  rec[date_field] = "2025-06-30";
  lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(at), rec.dump());
  write_lines(file, lines);
  return root;
}

Outcome leakage(const fs::path& out) {
  const std::vector<std::pair<std::string, const char*>> kinds{
      {"AAPL/ohlcv.jsonl", "date"},          {"AAPL/news.jsonl", "date"},
      {"AAPL/insider.jsonl", "date"},        {"AAPL/fundamentals.jsonl", "period_end"},
      {"_policy/news.jsonl", "date"},        {"_macro/indicators.jsonl", "date"}};
  int caught = 0;
  std::string codes;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const fs::path fx = poisoned_fixtures(out / fmt::format("fx{}", i), kinds[i].first, kinds[i].second);
    const int code = run_config("all_analysts.toml", out / fmt::format("ledger{}", i), fx);
    caught += code == app::exit_code::kLeakage;
    codes += fmt::format("{}{}={}", i ? ", " : "", kinds[i].first, code);
  }
  return {caught == 6, fmt::format("{}/6 aborted with exit {} ({})", caught, app::exit_code::kLeakage, codes)};
}

Outcome conservation(const fs::path& out) {
  std::size_t runs = 0, snapshots = 0;
  std::vector<std::string> problems;
  auto check = [&](const std::string& run_id, const std::vector<ledger::LedgerEntry>& entries) {
    ++runs;
    Money cash = Money::whole(100000);
    for (const auto& e : entries) {
      if (const auto* t = std::get_if<TradeRecord>(&e.payload)) {
        if (t->action == DecisionAction::Buy) cash -= notional(t->executed_shares, t->price);
        if (t->action == DecisionAction::Sell) cash += notional(t->executed_shares, t->price);
        if (t->cash_after != cash) problems.push_back(fmt::format("{} trade cash drift on {}: recorded {} expected {}", run_id, e.date.iso(), t->cash_after.to_string(), cash.to_string()));
      }
      if (const auto* s = std::get_if<ledger::PortfolioSnapshot>(&e.payload)) {
        ++snapshots;
        if (s->portfolio.cash != cash) problems.push_back(run_id + " snapshot cash mismatch on " + e.date.iso());
        if (s->portfolio.cash.is_negative()) problems.push_back(run_id + " negative cash");
        for (const auto& [t, p] : s->portfolio.positions) {
          if (p.shares < 0) problems.push_back(run_id + " negative shares " + t.str());
        }
      }
    }
    const auto final_snap = payloads<ledger::PortfolioSnapshot>(entries).back();
    if (final_snap.portfolio.cash != cash) problems.push_back(run_id + " final cash mismatch");
  };
  for (const char* name : {"stub_follow.toml", "all_analysts.toml", "buy_and_hold.toml", "stub_neutral.toml"}) {
    const auto cfg = app::load_config(config_path(name));
    if (const int code = run_config(name, out / name); code != 0) {
      problems.push_back(fmt::format("{} exit {}", name, code));
      continue;
    }
    check(cfg.run.run_id, ledger::Ledger(out / name).load_run(cfg.run.run_id));
  }
  std::mt19937_64 gen(7);
  for (int i = 0; i < 4; ++i) {
    auto cfg = app::load_config(config_path("stub_flaky.toml"));
    cfg.run.run_id = fmt::format("flaky-c{}", i);
    cfg.providers.at("stub").stub.seed = gen();
    cfg.run.risk.tilt_factor = static_cast<double>(gen() % 101) / 100.0;
    cfg.run.risk.max_weight = 0.1 + static_cast<double>(gen() % 90) / 100.0;
    check(cfg.run.run_id, engine_run(cfg, out / "flaky"));
  }
  return {problems.empty(), problems.empty() ? fmt::format("{} runs, {} snapshots, cash reconciles to the cent", runs,
                                                           snapshots)
                                             : problems.front()};
}

Outcome buy_and_hold(const fs::path& out) {
  if (const int code = run_config("buy_and_hold.toml", out); code != 0) return {false, fmt::format("exit {}", code)};
  const auto entries = ledger::Ledger(out).load_run("buy-and-hold");
  std::size_t trades_after_day1 = 0;
  for (const auto& t : payloads<TradeRecord>(entries)) trades_after_day1 += t.date != Date(2025, 3, 17) && t.executed_shares > 0;
  const auto r = metrics::evaluate_run("buy-and-hold", "buy-and-hold", entries, std::nullopt);
  const bool pass = trades_after_day1 == 0 && r.cr_bnh && r.cr == *r.cr_bnh && r.trades_executed > 0;
  return {pass, fmt::format("CR={:.17g} CR_bnh={:.17g}, trades after day 1: {}", r.cr, r.cr_bnh.value_or(NAN),
                            trades_after_day1)};
}

/// Forwards to the stub and keeps every request.
struct Recording : llm::ChatProvider {
  std::shared_ptr<llm::ChatProvider> inner;
  std::mutex mutex;
  std::vector<llm::ChatRequest> seen;
  explicit Recording(std::shared_ptr<llm::ChatProvider> p) : inner(std::move(p)) {}
  llm::ChatReply send(const llm::ChatRequest& r) override {
    {
      std::lock_guard lock(mutex);
      seen.push_back(r);
    }
    return inner->send(r);
  }
};

Outcome cvx_trim(const fs::path& out) {
  const Ticker cvx("CVX");
  const Date day(2025, 4, 3);
  const market::MarketGateway g(std::make_shared<market::ReplayProvider>(bundled_fixtures()));
  const Price price = g.fetch_price(cvx, market::SimulationClock::replay(day));

  FundState state;
  state.run_id = "cvx-trim";
  state.trading_date = Date(2025, 4, 2);
  state.portfolio = Portfolio::with_cash(Money::parse("4252.06"), state.trading_date);
  state.portfolio.positions[cvx] = Position{cvx, 184, Price::parse("160.00")};
  const Money total = state.portfolio.cash + notional(184, price);

  workflow::RunConfig c;
  c.run_id = "cvx-trim";
  c.universe = {cvx};
  c.start_date = c.end_date = day;
  c.analyst_set = {AnalystKind::Technical, AnalystKind::CompanyNews, AnalystKind::Policy, AnalystKind::Insider};
  c.model = {"stub", "scripted-neutral", 0.5, 3, std::chrono::seconds{60}};
  // Target weight (184 - 27) * price / total, nudged half a cent above so
  // the floor lands on -27 exactly.
  c.risk.max_weight = (157.0 * price.to_double() + 0.005) / total.to_double();

  auto rec = std::make_shared<Recording>(std::make_shared<llm::ScriptedStub>(
      llm::ScriptedStub::load_script(source_dir() / "scripts" / "cvx_trim.jsonl"), llm::StubOptions{}));
  llm::LlmGateway llm;
  llm.register_provider("stub", rec, std::chrono::milliseconds{0});
  ledger::Ledger l(out);
  l.register_run("cvx-trim");
  workflow::step_day(c, state, market::SimulationClock::replay(day), {g, llm, l});

  std::string prompt;
  for (const auto& r : rec->seen) {
    if (r.context.role == "Manager") prompt = r.prompt.user;
  }
  const auto decisions = payloads<Decision>(l.load_run("cvx-trim"));
  const bool recorded = decisions.size() == 1 && decisions[0].valid && decisions[0].action == DecisionAction::Sell &&
                        decisions[0].shares == 27 && decisions[0].price == Price::parse("156.12");
  const bool negative = prompt.find("Tradable Shares: -27\n") != std::string::npos;
  return {price == Price::parse("156.12") && total == Money::parse("32978.14") && recorded && negative,
          fmt::format("price {}, total {}, prompt {}, ledger {}", price.to_string(), total.to_string(),
                      negative ? "shows Tradable Shares: -27" : "lacks -27",
                      decisions.empty() ? std::string("no decision")
                                        : fmt::format("{} {} @ {}", to_string(decisions[0].action),
                                                      decisions[0].shares, decisions[0].price.to_string()))};
}

Outcome classifiers() {
  std::size_t table_bad = 0;
  for (const auto& c : livefund::testing::kConsistencyTable) {
    if (metrics::classify_consistency(livefund::testing::signals_for(c), livefund::testing::decision_for(c)).consistent !=
        c.consistent) {
      ++table_bad;
    }
  }
  using metrics::Effectiveness;
  const Ticker t("AAPL");
  const Date day(2025, 4, 8);
  const auto buy = Decision::make(t, day, DecisionAction::Buy, 5, Price::parse("172.42"), "x");
  const auto sell = Decision::make(t, day, DecisionAction::Sell, 27, Price::parse("156.12"), "x");
  const auto hold = Decision::make(t, day, DecisionAction::Hold, 0, Price::parse("156.12"), "x");
  const std::vector<std::pair<Effectiveness, Effectiveness>> eff{
      {metrics::classify_effectiveness(buy, Price::parse("198.85")), Effectiveness::Effective},
      {metrics::classify_effectiveness(buy, Price::parse("172.42")), Effectiveness::NotEffective},
      {metrics::classify_effectiveness(sell, Price::parse("150.00")), Effectiveness::Effective},
      {metrics::classify_effectiveness(sell, Price::parse("156.12")), Effectiveness::NotEffective},
      {metrics::classify_effectiveness(hold, Price::parse("150.00")), Effectiveness::NotApplicable},
      {metrics::classify_effectiveness(buy, std::nullopt), Effectiveness::NotApplicable}};
  std::size_t eff_bad = 0;
  for (const auto& [got, want] : eff) eff_bad += got != want;

  std::mt19937_64 gen(500);
  std::size_t flips = 0;
  for (int i = 0; i < 500; ++i) {
    std::vector<Signal> signals;
    const int n = static_cast<int>(gen() % 10);
    for (int k = 0; k < n; ++k) {
      signals.push_back(livefund::testing::sig(kAllDirections[gen() % 3], kAllAnalysts[gen() % 6], gen() % 5 != 0));
    }
    const auto action = static_cast<DecisionAction>(gen() % 3);
    const auto dec = Decision::make(t, day, action, action == DecisionAction::Hold ? 0 : 1, Price::parse("10"), "x");
    const bool base = metrics::classify_consistency(signals, dec).consistent;
    std::shuffle(signals.begin(), signals.end(), gen);
    flips += metrics::classify_consistency(signals, dec).consistent != base;
  }
  return {table_bad == 0 && eff_bad == 0 && flips == 0,
          fmt::format("golden {}/20 consistency, {}/{} effectiveness, {} verdict changes over 500 shuffles",
                      20 - table_bad, eff.size() - eff_bad, eff.size(), flips)};
}

Outcome runtime(const fs::path& out) {
  const auto t0 = Clock::now();
  const int code = run_config("stub_follow.toml", out);
  const double secs = seconds_since(t0);
  return {code == 0 && secs < 10.0, fmt::format("24 days x 5 tickers in {:.3f}s (exit {})", secs, code)};
}

}  // namespace

int main() {
  spdlog::set_default_logger(spdlog::null_logger_mt("livefund"));
  TempDir tmp;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"metric-oracles", metric_oracles},
      {"cr-anchor", cr_anchor},
      {"cardinality", [&] { return cardinality(tmp / "cardinality"); }},
      {"validity", [&] { return validity(tmp / "validity"); }},
      {"determinism", [&] { return determinism(tmp / "determinism"); }},
      {"leakage-guard", [&] { return leakage(tmp / "leakage"); }},
      {"conservation", [&] { return conservation(tmp / "conservation"); }},
      {"buy-and-hold-identity", [&] { return buy_and_hold(tmp / "bnh"); }},
      {"cvx-trim-scenario", [&] { return cvx_trim(tmp / "cvx"); }},
      {"behavior-classifiers", classifiers},
      {"end-to-end-runtime", [&] { return runtime(tmp / "runtime"); }},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", name, o.detail);
  }
  return failures;
}
