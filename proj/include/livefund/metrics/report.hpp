#pragma once

#include <optional>
#include <string>
#include <vector>

#include "livefund/domain/serialization.hpp"
#include "livefund/ledger/ledger.hpp"
#include "livefund/market/gateway.hpp"
#include "livefund/metrics/behavior.hpp"
#include "livefund/metrics/performance.hpp"

namespace livefund::metrics {

struct MetricReport {
  std::string run_id;
  std::string model;
  std::size_t days = 0;
  Date first_date;
  Date last_date;
  Money initial_value;
  Money final_value;
  double cr = 0.0;
  std::optional<double> cr_bnh;
  std::optional<double> sr;
  double mdd = 0.0;
  std::optional<double> wr;
  std::optional<double> beta;
  std::optional<double> alpha;
  Validity validity;
  Distributions distributions;
  BehaviorSummary behavior;
  std::size_t trades_executed = 0;
  std::vector<std::string> notes;  // why an optional metric is absent
};

/// Everything computable from a loaded ledger. `market` must share the
/// run's dates for beta/alpha. Throws EmptyRun without snapshots.
MetricReport evaluate_run(const std::string& run_id, const std::string& model,
                          const std::vector<ledger::LedgerEntry>& entries,
                          const std::optional<ReturnSeries>& market, const MetricParams& params = {});

/// Benchmark closes on exactly `dates`. Throws MisalignedSeries when a date
/// has no bar.
ReturnSeries benchmark_series(const market::MarketGateway& gateway, const Ticker& benchmark,
                              const std::vector<Date>& dates);

Json to_json(const MetricReport& report);

}  // namespace livefund::metrics
