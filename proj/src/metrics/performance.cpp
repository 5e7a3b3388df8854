#include "livefund/metrics/performance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "livefund/domain/error.hpp"

namespace livefund::metrics {

namespace {

double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Sample covariance with (n - 1) normalization.
double covariance(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = mean(a);
  const double mb = mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(a.size() - 1);
}

bool negligible(double spread, double scale) { return spread <= 1e-12 * std::max(std::abs(scale), 1e-12); }

void check_aligned(const ReturnSeries& s, const ReturnSeries& m) {
  s.validate();
  m.validate();
  if (s.dates != m.dates) raise(ErrorKind::MisalignedSeries, "portfolio and market series have different dates");
  if (s.size() < 3) raise(ErrorKind::InsufficientData, "beta needs at least two returns");
}

}  // namespace

ReturnSeries ReturnSeries::from_points(const std::vector<ledger::ValuePoint>& points) {
  ReturnSeries s;
  for (const auto& p : points) {
    s.dates.push_back(p.date);
    s.values.push_back(p.value.to_double());
  }
  s.validate();
  return s;
}

ReturnSeries ReturnSeries::from_values(std::vector<double> values) {
  ReturnSeries s;
  s.values = std::move(values);
  Date d(2000, 1, 3);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.dates.push_back(d.plus_days(static_cast<int>(i)));
  s.validate();
  return s;
}

void ReturnSeries::validate() const {
  if (values.empty()) raise(ErrorKind::InvalidArgument, "return series is empty");
  if (dates.size() != values.size()) raise(ErrorKind::InvalidArgument, "series dates and values differ in length");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      raise(ErrorKind::InvalidArgument, "series value at " + dates[i].iso() + " is not positive");
    }
    if (i > 0 && !(dates[i - 1] < dates[i])) raise(ErrorKind::InvalidArgument, "series dates are not increasing");
  }
}

std::vector<double> ReturnSeries::returns() const {
  std::vector<double> r;
  r.reserve(values.size() > 0 ? values.size() - 1 : 0);
  for (std::size_t i = 1; i < values.size(); ++i) r.push_back(values[i] / values[i - 1] - 1.0);
  return r;
}

double cumulative_return(const ReturnSeries& series) {
  series.validate();
  return (series.values.back() / series.values.front() - 1.0) * 100.0;
}

double cumulative_return(Money initial, Money final_value) {
  if (!initial.is_positive()) raise(ErrorKind::InvalidArgument, "initial value must be positive");
  return static_cast<double>(final_value.units() - initial.units()) * 100.0 / static_cast<double>(initial.units());
}

double buy_and_hold_return(const Portfolio& day1, const PriceMap& start_prices, const PriceMap& end_prices) {
  return cumulative_return(ledger::portfolio_value(day1, start_prices), ledger::portfolio_value(day1, end_prices));
}

double sharpe_ratio(const ReturnSeries& series, const MetricParams& params) {
  series.validate();
  if (params.periods_per_year < 1) raise(ErrorKind::InvalidArgument, "periods_per_year must be >= 1");
  if (series.size() < 3) raise(ErrorKind::InsufficientData, "Sharpe ratio needs at least two returns");
  std::vector<double> excess = series.returns();
  const double rf_daily = params.risk_free_annual / params.periods_per_year;
  for (double& r : excess) r -= rf_daily;
  const double m = mean(excess);
  const double sd = std::sqrt(covariance(excess, excess));
  if (negligible(sd, m)) raise(ErrorKind::ZeroVariance, "excess returns are constant");
  return m / sd * std::sqrt(static_cast<double>(params.periods_per_year));
}

double max_drawdown(const ReturnSeries& series) {
  series.validate();
  double peak = series.values.front();
  double worst = 0.0;
  for (double v : series.values) {
    peak = std::max(peak, v);
    worst = std::max(worst, (peak - v) / peak * 100.0);
  }
  return worst;
}

double beta(const ReturnSeries& series, const ReturnSeries& market) {
  check_aligned(series, market);
  const auto rs = series.returns();
  const auto rm = market.returns();
  const double var_m = covariance(rm, rm);
  if (negligible(std::sqrt(std::max(var_m, 0.0)), mean(rm))) {
    raise(ErrorKind::ZeroMarketVariance, "market returns are constant");
  }
  return covariance(rs, rm) / var_m;
}

double alpha(const ReturnSeries& series, const ReturnSeries& market, const MetricParams& params) {
  const double b = beta(series, market);
  const double r_s = series.values.back() / series.values.front() - 1.0;
  const double r_m = market.values.back() / market.values.front() - 1.0;
  const double r_f =
      params.risk_free_annual * static_cast<double>(series.size() - 1) / static_cast<double>(params.periods_per_year);
  return r_s - (r_f + b * (r_m - r_f));
}

}  // namespace livefund::metrics
