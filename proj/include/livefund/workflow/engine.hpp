#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "livefund/domain/types.hpp"
#include "livefund/indicators/technical.hpp"
#include "livefund/ledger/ledger.hpp"
#include "livefund/llm/gateway.hpp"
#include "livefund/market/clock.hpp"
#include "livefund/market/gateway.hpp"

namespace livefund::workflow {

struct RiskParams {
  double tilt_factor = 0.5;  // in [0, 1]
  double max_weight = 0.30;  // in (0, 1]

  void validate() const;
};

enum class PlannerMode { Deterministic, Dynamic };

struct RunConfig {
  std::string run_id;
  std::vector<Ticker> universe;
  Money initial_cash = Money::whole(100000);
  Date start_date;
  Date end_date;
  PlannerMode planner_mode = PlannerMode::Deterministic;
  std::vector<AnalystKind> analyst_set;
  llm::ModelProfile model;
  std::size_t decision_memory_size = 5;
  RiskParams risk;
  market::DataWindows windows;
  indicators::IndicatorParams indicators;
  std::size_t parallelism = 4;  // concurrent analyst calls

  /// Throws ConfigError on a broken invariant.
  void validate() const;
};

/// Tally of LLM traffic. Failed calls count max_retries + 1 attempts.
struct LlmStats {
  std::int64_t calls = 0;
  std::int64_t attempts = 0;
  std::int64_t failures = 0;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  double cost = 0.0;

  LlmStats& operator+=(const LlmStats& o);
};

/// Collaborators shared by every step of a run.
struct Services {
  const market::MarketGateway& market;
  const llm::LlmGateway& llm;
  ledger::Ledger& ledger;
};

FundState initial_state(const RunConfig& config);

std::vector<AnalystKind> plan_analysts(const RunConfig& config, const FundState& state, const llm::LlmGateway& llm,
                                       Date date, LlmStats* stats = nullptr);

/// Invalid-signal fallback on LLM or parse failure. Leakage propagates.
Signal run_analyst(AnalystKind kind, const Ticker& ticker, const market::SimulationClock& clock,
                   const market::MarketGateway& market, const llm::LlmGateway& llm, const RunConfig& config,
                   LlmStats* stats = nullptr);

/// Signed share count moving the position toward its sentiment-tilted equal
/// weight. `marks` prices the other holdings; `ticker` is marked at `price`.
std::int64_t compute_tradable_shares(const Portfolio& portfolio, const Ticker& ticker, Price price,
                                     const std::vector<Signal>& signals, const RiskParams& risk,
                                     std::size_t universe_size, const PriceMap& marks = {});

struct DecisionOutcome {
  Decision decision;
  std::int64_t requested_shares = 0;  // as parsed, before clamping
};

/// Manager call plus feasibility clamps. Invalid-decision fallback on LLM or
/// parse failure.
DecisionOutcome decide(const Ticker& ticker, const FundState& state, Price price, std::int64_t tradable,
                       const llm::LlmGateway& llm, const RunConfig& config, LlmStats* stats = nullptr);

/// Applies a feasible decision. Throws InfeasibleExecution otherwise.
std::pair<Portfolio, TradeRecord> execute_decision(const Portfolio& portfolio, const Decision& decision,
                                                   const std::string& run_id,
                                                   std::optional<std::int64_t> requested_shares = std::nullopt);

struct DayResult {
  FundState state;
  std::vector<AnalystKind> planned;
  std::size_t signals = 0;
  std::size_t valid_signals = 0;
  std::size_t decisions = 0;
  std::size_t valid_decisions = 0;
  LlmStats llm;
};

/// One trading day for the whole universe; the day's records reach the
/// ledger in a single batch ending with the portfolio snapshot.
DayResult step_day(const RunConfig& config, const FundState& state, const market::SimulationClock& clock,
                   const Services& services);

struct RunSummary {
  std::string run_id;
  std::size_t days = 0;
  std::size_t signals = 0;
  std::size_t valid_signals = 0;
  std::size_t decisions = 0;
  std::size_t valid_decisions = 0;
  Portfolio final_portfolio;
  std::optional<Money> final_value;
  LlmStats llm;
};

/// Replays every trading day in [start_date, end_date]. With `resume`, state
/// is rebuilt from the ledger and already recorded days are skipped.
RunSummary run_period(const RunConfig& config, const Services& services, bool resume = false);

/// Live mode: one step for the clock's current date.
RunSummary run_live_day(const RunConfig& config, const market::SimulationClock& clock, const Services& services);

/// Portfolio and decision memory after the last complete day in a ledger.
/// Throws CorruptLedger when the ledger ends inside a day.
FundState rebuild_state(const RunConfig& config, const std::vector<ledger::LedgerEntry>& entries);

}  // namespace livefund::workflow
