#include "livefund/workflow/engine.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

#include "livefund/domain/error.hpp"
#include "livefund/llm/parsers.hpp"
#include "livefund/llm/prompts.hpp"

namespace livefund::workflow {

void RiskParams::validate() const {
  if (!(tilt_factor >= 0.0 && tilt_factor <= 1.0)) raise(ErrorKind::ConfigError, "tilt_factor must be in [0, 1]");
  if (!(max_weight > 0.0 && max_weight <= 1.0)) raise(ErrorKind::ConfigError, "max_weight must be in (0, 1]");
}

void RunConfig::validate() const {
  if (!ledger::is_valid_run_id(run_id)) raise(ErrorKind::ConfigError, "invalid run id '" + run_id + "'");
  if (universe.empty()) raise(ErrorKind::ConfigError, "universe is empty");
  std::set<Ticker> seen(universe.begin(), universe.end());
  if (seen.size() != universe.size()) raise(ErrorKind::ConfigError, "universe lists a ticker twice");
  if (!initial_cash.is_positive()) raise(ErrorKind::ConfigError, "initial cash must be positive");
  if (start_date > end_date) raise(ErrorKind::ConfigError, "start date is after end date");
  if (analyst_set.empty()) raise(ErrorKind::ConfigError, "analyst set is empty");
  std::set<AnalystKind> kinds(analyst_set.begin(), analyst_set.end());
  if (kinds.size() != analyst_set.size()) raise(ErrorKind::ConfigError, "analyst set lists an analyst twice");
  if (decision_memory_size == 0) raise(ErrorKind::ConfigError, "decision memory size must be >= 1");
  if (!(model.temperature >= 0.0 && model.temperature <= 2.0)) {
    raise(ErrorKind::ConfigError, "temperature must be in [0, 2]");
  }
  if (model.max_retries < 0) raise(ErrorKind::ConfigError, "max_retries must be >= 0");
  if (parallelism == 0) raise(ErrorKind::ConfigError, "parallelism must be >= 1");
  if (windows.technical_window < 2) raise(ErrorKind::ConfigError, "technical window must be >= 2");
  risk.validate();
}

LlmStats& LlmStats::operator+=(const LlmStats& o) {
  calls += o.calls;
  attempts += o.attempts;
  failures += o.failures;
  prompt_tokens += o.prompt_tokens;
  completion_tokens += o.completion_tokens;
  cost += o.cost;
  return *this;
}

namespace {

struct Completion {
  std::optional<std::string> text;
  LlmStats stats;
};

/// complete() with LlmUnavailable folded into an empty result.
Completion call_llm(const llm::LlmGateway& llm, const llm::ModelProfile& profile, const llm::Prompt& prompt,
                    const llm::CallContext& ctx) {
  Completion out;
  out.stats.calls = 1;
  try {
    const llm::ChatExchange ex = llm.complete(profile, prompt, ctx);
    out.text = ex.response_text;
    out.stats.attempts = ex.attempts;
    out.stats.prompt_tokens = ex.token_usage.prompt_tokens;
    out.stats.completion_tokens = ex.token_usage.completion_tokens;
    out.stats.cost = ex.cost_estimate;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::LlmUnavailable) throw;
    out.stats.attempts = profile.max_retries + 1;
    out.stats.failures = 1;
    spdlog::warn("{} {} {}: {}", ctx.role, ctx.ticker ? ctx.ticker->str() : "-",
                 ctx.date ? ctx.date->iso() : "-", e.what());
  }
  return out;
}

void add_stats(LlmStats* sink, const LlmStats& s) {
  if (sink) *sink += s;
}

}  // namespace

FundState initial_state(const RunConfig& config) {
  FundState s;
  s.run_id = config.run_id;
  s.trading_date = config.start_date;
  s.portfolio = Portfolio::with_cash(config.initial_cash, config.start_date);
  s.memory_capacity = config.decision_memory_size;
  return s;
}

std::vector<AnalystKind> plan_analysts(const RunConfig& config, const FundState& state, const llm::LlmGateway& llm,
                                       Date date, LlmStats* stats) {
  if (config.analyst_set.empty()) raise(ErrorKind::InvalidArgument, "analyst set is empty");
  if (config.planner_mode == PlannerMode::Deterministic) return config.analyst_set;

  const llm::Prompt prompt = llm::render_planner_prompt(config.universe, state.portfolio, config.analyst_set);
  const Completion c = call_llm(llm, config.model, prompt, {"Planner", std::nullopt, date});
  add_stats(stats, c.stats);
  if (!c.text) {
    spdlog::warn("planner unavailable on {}; using the configured analyst set", date.iso());
    return config.analyst_set;
  }
  try {
    return llm::parse_planner_response(*c.text, config.analyst_set);
  } catch (const Error& e) {
    spdlog::warn("planner response rejected on {} ({}); using the configured analyst set", date.iso(), e.what());
    return config.analyst_set;
  }
}

Signal run_analyst(AnalystKind kind, const Ticker& ticker, const market::SimulationClock& clock,
                   const market::MarketGateway& market, const llm::LlmGateway& llm, const RunConfig& config,
                   LlmStats* stats) {
  const Date date = clock.current_date();
  const auto& w = config.windows;
  llm::AnalystPayload payload;
  switch (kind) {
    case AnalystKind::Technical: {
      const auto bars = market.fetch_ohlcv(ticker, w.technical_window, clock);
      payload = indicators::summarize(bars, config.indicators);
      break;
    }
    case AnalystKind::CompanyNews: payload = market.fetch_company_news(ticker, w.news_count, clock); break;
    case AnalystKind::Policy: payload = market.fetch_policy_news(w.news_count, clock); break;
    case AnalystKind::Insider: payload = market.fetch_insider(ticker, w.insider_count, clock); break;
    case AnalystKind::Fundamental: payload = market.fetch_fundamentals(ticker, clock); break;
    case AnalystKind::MacroEconomic: payload = market.fetch_macro(w.macro_count, clock); break;
  }
  const llm::Prompt prompt = llm::render_analyst_prompt(kind, ticker, date, payload);
  const Completion c = call_llm(llm, config.model, prompt, {std::string(to_string(kind)), ticker, date});
  add_stats(stats, c.stats);
  if (!c.text) return Signal::fallback(kind, ticker, date);
  try {
    llm::ParsedSignal parsed = llm::parse_signal_response(*c.text);
    return Signal::make(kind, ticker, date, parsed.direction, std::move(parsed.justification));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MalformedSignalResponse) throw;
    spdlog::warn("{} {} {}: {}", to_string(kind), ticker.str(), date.iso(), e.what());
    return Signal::fallback(kind, ticker, date);
  }
}

std::int64_t compute_tradable_shares(const Portfolio& portfolio, const Ticker& ticker, Price price,
                                     const std::vector<Signal>& signals, const RiskParams& risk,
                                     std::size_t universe_size, const PriceMap& marks) {
  if (!price.is_positive()) raise(ErrorKind::InvalidArgument, "price must be positive");
  if (universe_size == 0) raise(ErrorKind::InvalidArgument, "universe size must be positive");
  PriceMap priced = marks;
  priced[ticker] = price;
  const Money total = ledger::portfolio_value(portfolio, priced);

  int bullish = 0;
  int bearish = 0;
  int valid = 0;
  for (const auto& s : signals) {
    if (!s.valid) continue;
    ++valid;
    if (s.direction == SignalDirection::Bullish) ++bullish;
    if (s.direction == SignalDirection::Bearish) ++bearish;
  }
  const double base = 1.0 / static_cast<double>(universe_size);
  const double tilt = risk.tilt_factor * static_cast<double>(bullish - bearish) / std::max(1, valid);
  const double weight = std::clamp(base * (1.0 + tilt), 0.0, risk.max_weight);
  const Money target = Money::from_double(weight * total.to_double());
  const Money current = notional(portfolio.shares_of(ticker), price);
  return floor_shares(target - current, price);
}

DecisionOutcome decide(const Ticker& ticker, const FundState& state, Price price, std::int64_t tradable,
                       const llm::LlmGateway& llm, const RunConfig& config, LlmStats* stats) {
  if (!price.is_positive()) raise(ErrorKind::InvalidArgument, "price must be positive");
  const Date date = state.trading_date;
  const std::int64_t holding = state.portfolio.shares_of(ticker);

  static const DecisionMemory kEmpty;
  const auto mem_it = state.decision_memory.find(ticker);
  const DecisionMemory& memory = mem_it == state.decision_memory.end() ? kEmpty : mem_it->second;
  DecisionMemory shown(memory.begin(), memory.begin() + static_cast<std::ptrdiff_t>(
                                                            std::min(memory.size(), state.memory_capacity)));
  static const std::vector<Signal> kNone;
  const auto sig_it = state.signals_today.find(ticker);
  const std::vector<Signal>& signals = sig_it == state.signals_today.end() ? kNone : sig_it->second;

  const llm::Prompt prompt = llm::render_manager_prompt(ticker, shown, price, holding, tradable, signals);
  const Completion c = call_llm(llm, config.model, prompt, {"Manager", ticker, date});
  add_stats(stats, c.stats);
  if (!c.text) return {Decision::fallback(ticker, date, price), 0};

  llm::ParsedDecision parsed;
  try {
    parsed = llm::parse_decision_response(*c.text);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MalformedDecisionResponse) throw;
    spdlog::warn("Manager {} {}: {}", ticker.str(), date.iso(), e.what());
    return {Decision::fallback(ticker, date, price), 0};
  }
  if (parsed.price && *parsed.price != price) {
    spdlog::info("Manager {} {}: model quoted {} but executes at {}", ticker.str(), date.iso(),
                 llm::display_price(*parsed.price), llm::display_price(price));
  }

  std::int64_t cap = 0;
  if (parsed.action == DecisionAction::Buy) {
    cap = std::min(std::max<std::int64_t>(0, tradable), affordable_shares(state.portfolio.cash, price));
  } else if (parsed.action == DecisionAction::Sell) {
    cap = holding;
  }
  DecisionAction action = parsed.action;
  std::int64_t shares = parsed.shares;
  if (action != DecisionAction::Hold && shares > cap) {
    spdlog::info("Manager {} {}: {} {} clamped to {}", ticker.str(), date.iso(), to_string(action), shares, cap);
    shares = cap;
    if (shares == 0) action = DecisionAction::Hold;
  }
  return {Decision::make(ticker, date, action, shares, price, std::move(parsed.justification)), parsed.shares};
}

std::pair<Portfolio, TradeRecord> execute_decision(const Portfolio& portfolio, const Decision& decision,
                                                   const std::string& run_id,
                                                   std::optional<std::int64_t> requested_shares) {
  Portfolio next = portfolio;
  const Ticker& t = decision.ticker;
  const std::int64_t held = portfolio.shares_of(t);
  const Money value = notional(decision.shares, decision.price);

  switch (decision.action) {
    case DecisionAction::Buy: {
      if (decision.shares < 1 || value > portfolio.cash) {
        raise(ErrorKind::InfeasibleExecution, "cannot buy " + std::to_string(decision.shares) + " " + t.str() +
                                                  " with cash " + portfolio.cash.to_string());
      }
      Position& pos = next.positions[t];
      pos.ticker = t;
      const std::int64_t total = held + decision.shares;
      const __int128 weighted = static_cast<__int128>(held) * pos.cost_basis.units() +
                                static_cast<__int128>(decision.shares) * decision.price.units();
      // Half away from zero; all terms are non-negative.
      const __int128 avg = (2 * weighted + total) / (2 * static_cast<__int128>(total));
      pos.shares = total;
      pos.cost_basis = Price::from_units(static_cast<std::int64_t>(avg));
      next.cash -= value;
      break;
    }
    case DecisionAction::Sell: {
      if (decision.shares < 1 || decision.shares > held) {
        raise(ErrorKind::InfeasibleExecution,
              "cannot sell " + std::to_string(decision.shares) + " " + t.str() + " holding " + std::to_string(held));
      }
      Position& pos = next.positions[t];
      pos.shares -= decision.shares;
      if (pos.shares == 0) pos.cost_basis = Price{};
      next.cash += value;
      break;
    }
    case DecisionAction::Hold:
      if (decision.shares != 0) raise(ErrorKind::InfeasibleExecution, "Hold with nonzero shares");
      break;
  }
  next.check_invariants();

  TradeRecord rec;
  rec.run_id = run_id;
  rec.date = decision.date;
  rec.ticker = t;
  rec.action = decision.action;
  rec.requested_shares = requested_shares.value_or(decision.shares);
  rec.executed_shares = decision.shares;
  rec.price = decision.price;
  rec.cash_after = next.cash;
  rec.shares_after = next.shares_of(t);
  rec.justification = decision.justification;
  return {std::move(next), std::move(rec)};
}

namespace {

/// Runs tasks[i] for every i on up to `threads` workers. The first failure
/// by index is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min(threads, count);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

DayResult step_day(const RunConfig& config, const FundState& state, const market::SimulationClock& clock,
                   const Services& services) {
  const Date date = clock.current_date();
  DayResult out;
  out.state = state;
  FundState& s = out.state;
  s.trading_date = date;
  s.signals_today.clear();
  s.memory_capacity = config.decision_memory_size;

  PriceMap prices;
  for (const auto& t : config.universe) prices[t] = services.market.fetch_price(t, clock);
  for (const auto& [t, pos] : s.portfolio.positions) {
    if (pos.shares > 0 && !prices.count(t)) prices[t] = services.market.fetch_price(t, clock);
  }

  out.planned = plan_analysts(config, s, services.llm, date, &out.llm);
  std::vector<AnalystKind> kinds = out.planned;
  std::sort(kinds.begin(), kinds.end());

  const std::size_t per_ticker = kinds.size();
  const std::size_t n_tasks = config.universe.size() * per_ticker;
  std::vector<Signal> signals(n_tasks);
  std::vector<LlmStats> task_stats(n_tasks);
  parallel_for(n_tasks, config.parallelism, [&](std::size_t i) {
    const Ticker& t = config.universe[i / per_ticker];
    signals[i] = run_analyst(kinds[i % per_ticker], t, clock, services.market, services.llm, config, &task_stats[i]);
  });
  for (const auto& st : task_stats) out.llm += st;
  for (std::size_t i = 0; i < n_tasks; ++i) {
    s.signals_today[config.universe[i / per_ticker]].push_back(signals[i]);
  }

  // Execution order; trades are written in the same order so cash_after
  // reads as a running balance.
  std::vector<std::pair<Ticker, std::pair<Decision, TradeRecord>>> outcomes;
  for (const auto& t : config.universe) {
    const Price price = prices.at(t);
    const std::int64_t tradable = compute_tradable_shares(s.portfolio, t, price, s.signals_today[t], config.risk,
                                                          config.universe.size(), prices);
    DecisionOutcome d = decide(t, s, price, tradable, services.llm, config, &out.llm);
    auto [next, trade] = execute_decision(s.portfolio, d.decision, config.run_id, d.requested_shares);
    s.portfolio = std::move(next);
    s.decision_memory[t] = push_decision_memory(s.decision_memory[t], d.decision, s.memory_capacity);
    outcomes.emplace_back(t, std::make_pair(std::move(d.decision), std::move(trade)));
  }
  s.portfolio.as_of = date;

  std::vector<std::pair<Date, ledger::EntryPayload>> batch;
  for (const auto& [t, outcome] : outcomes) {
    for (const auto& sig : s.signals_today[t]) {
      ++out.signals;
      if (sig.valid) ++out.valid_signals;
      batch.emplace_back(date, sig);
    }
    ++out.decisions;
    if (outcome.first.valid) ++out.valid_decisions;
    batch.emplace_back(date, outcome.first);
    batch.emplace_back(date, outcome.second);
  }
  const Money total = ledger::portfolio_value(s.portfolio, prices);
  batch.emplace_back(date, ledger::PortfolioSnapshot{s.portfolio, total});
  services.ledger.append_batch(config.run_id, batch);

  spdlog::info("{} {}: {}/{} valid signals, {}/{} valid decisions, value {}", config.run_id, date.iso(),
               out.valid_signals, out.signals, out.valid_decisions, out.decisions, total.to_string());
  return out;
}

FundState rebuild_state(const RunConfig& config, const std::vector<ledger::LedgerEntry>& entries) {
  FundState s = initial_state(config);
  std::optional<std::size_t> last_snapshot;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].kind() == ledger::EntryKind::Snapshot) last_snapshot = i;
  }
  const std::size_t complete = last_snapshot ? *last_snapshot + 1 : 0;
  if (complete != entries.size()) {
    raise(ErrorKind::CorruptLedger, "run '" + config.run_id + "' ends inside the day " +
                                        entries.back().date.iso() + "; refusing to resume");
  }
  for (std::size_t i = 0; i < complete; ++i) {
    const auto& e = entries[i];
    if (const auto* d = std::get_if<Decision>(&e.payload)) {
      s.decision_memory[d->ticker] = push_decision_memory(s.decision_memory[d->ticker], *d, s.memory_capacity);
    } else if (const auto* snap = std::get_if<ledger::PortfolioSnapshot>(&e.payload)) {
      s.portfolio = snap->portfolio;
      s.trading_date = e.date;
    }
  }
  return s;
}

namespace {

void absorb(RunSummary& summary, const DayResult& day) {
  ++summary.days;
  summary.signals += day.signals;
  summary.valid_signals += day.valid_signals;
  summary.decisions += day.decisions;
  summary.valid_decisions += day.valid_decisions;
  summary.llm += day.llm;
}

}  // namespace

RunSummary run_period(const RunConfig& config, const Services& services, bool resume) {
  config.validate();
  RunSummary summary;
  summary.run_id = config.run_id;

  FundState state = initial_state(config);
  std::optional<Date> done_through;
  if (resume) {
    const auto entries = services.ledger.load_run(config.run_id);
    state = rebuild_state(config, entries);
    if (!entries.empty()) done_through = state.trading_date;
  }

  const auto days = services.market.trading_days(config.universe, config.start_date, config.end_date);
  if (days.empty()) spdlog::warn("no trading days between {} and {}", config.start_date.iso(), config.end_date.iso());

  auto clock = market::SimulationClock::replay(config.start_date);
  for (const Date d : days) {
    if (done_through && d <= *done_through) continue;
    clock.advance_to(d);
    DayResult day = step_day(config, state, clock, services);
    absorb(summary, day);
    state = std::move(day.state);
  }
  summary.final_portfolio = state.portfolio;
  if (summary.days > 0 || done_through) {
    summary.final_value = services.ledger.daily_value_series(config.run_id).back().value;
  }
  return summary;
}

RunSummary run_live_day(const RunConfig& config, const market::SimulationClock& clock, const Services& services) {
  config.validate();
  RunSummary summary;
  summary.run_id = config.run_id;
  const Date today = clock.current_date();

  const auto entries = services.ledger.load_run(config.run_id);
  FundState state = rebuild_state(config, entries);
  if (!entries.empty() && state.trading_date >= today) {
    spdlog::warn("run {} already has a snapshot for {}; nothing to do", config.run_id, today.iso());
    summary.final_portfolio = state.portfolio;
    return summary;
  }
  const auto days = services.market.trading_days(config.universe, today, today);
  if (days.empty()) {
    spdlog::warn("{} is not a trading day; nothing to do", today.iso());
    summary.final_portfolio = state.portfolio;
    return summary;
  }
  DayResult day = step_day(config, state, clock, services);
  absorb(summary, day);
  summary.final_portfolio = day.state.portfolio;
  summary.final_value = services.ledger.daily_value_series(config.run_id).back().value;
  return summary;
}

}  // namespace livefund::workflow
