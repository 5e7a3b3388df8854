#pragma once

#include <optional>
#include <vector>

#include "livefund/domain/types.hpp"
#include "livefund/ledger/ledger.hpp"

namespace livefund::metrics {

/// Portfolio totals aligned to dates; at least one point, all positive.
struct ReturnSeries {
  std::vector<Date> dates;
  std::vector<double> values;

  static ReturnSeries from_points(const std::vector<ledger::ValuePoint>& points);
  /// Undated series; dates are consecutive days from 2000-01-03.
  static ReturnSeries from_values(std::vector<double> values);

  /// Throws InvalidArgument on an empty, misaligned or non-positive series.
  void validate() const;
  /// r_t = P_t / P_{t-1} - 1, length size() - 1.
  std::vector<double> returns() const;
  std::size_t size() const { return values.size(); }
};

struct MetricParams {
  double risk_free_annual = 0.0429;
  int periods_per_year = 252;
};

/// (P_final / P_initial - 1) * 100.
double cumulative_return(const ReturnSeries& series);
/// Same, computed from exact cents with one rounding step.
double cumulative_return(Money initial, Money final_value);

/// CR of the frozen day-1 portfolio revalued from `start_prices` to
/// `end_prices`. Throws MissingPrice.
double buy_and_hold_return(const Portfolio& day1, const PriceMap& start_prices, const PriceMap& end_prices);

/// Annualized mean / sample std of daily excess returns. Throws
/// InsufficientData below two returns and ZeroVariance for a flat series.
double sharpe_ratio(const ReturnSeries& series, const MetricParams& params = {});

/// Largest peak-to-trough decline in percent; single pass.
double max_drawdown(const ReturnSeries& series);

/// Sample Cov(r_s, r_m) / Var(r_m). Dates must match exactly.
double beta(const ReturnSeries& series, const ReturnSeries& market);

/// r_s - [r_f + beta (r_m - r_f)] over the whole window, with r_f scaled to
/// the number of return periods.
double alpha(const ReturnSeries& series, const ReturnSeries& market, const MetricParams& params = {});

}  // namespace livefund::metrics
