#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "livefund/market/records.hpp"

namespace livefund::indicators {

enum class TrendLabel { Uptrend, Downtrend, Flat };
std::string_view to_string(TrendLabel label);

struct TrendReading {
  TrendLabel label = TrendLabel::Flat;
  double short_sma = 0.0;
  double long_sma = 0.0;
};

struct PriceLevels {
  Price support;
  Price resistance;
};

struct IndicatorParams {
  std::size_t rsi_period = 14;
  std::size_t trend_short = 10;
  std::size_t trend_long = 50;
  double trend_epsilon = 0.001;
  std::size_t mean_reversion_window = 20;
  std::size_t volatility_window = 20;
  std::size_t volume_window = 20;
  std::size_t levels_window = 20;
};

/// Wilder RSI over the whole series: simple average of the first `period`
/// changes, then (prev * (period - 1) + current) / period smoothing.
/// Needs closes.size() >= period + 1.
double compute_rsi(std::span<const double> closes, std::size_t period = 14);

/// SMA crossover with a relative dead band of `epsilon`.
TrendReading compute_trend(std::span<const double> closes, std::size_t short_window,
                           std::size_t long_window, double epsilon = 0.001);

/// (last - mean) / sample std over the trailing window; 0 for a flat window.
double compute_mean_reversion(std::span<const double> closes, std::size_t window);

/// Sample std of the trailing `window` log returns, times sqrt(252).
double compute_volatility(std::span<const double> closes, std::size_t window);

/// Latest volume over the mean of the `window` volumes before it.
double compute_volume_ratio(std::span<const double> volumes, std::size_t window);

/// Rolling extrema: min(low) and max(high) of the trailing window.
PriceLevels compute_price_levels(std::span<const market::OhlcvBar> bars, std::size_t window);

/// The six readings that feed the technical analyst prompt, each with a
/// fixed-format sentence. Readings lacking history are absent and render as
/// "insufficient history".
struct TechnicalSummary {
  std::optional<TrendReading> trend;
  std::optional<double> mean_reversion_z;
  std::optional<double> rsi;
  std::optional<double> volatility;
  std::optional<double> volume_ratio;
  std::optional<PriceLevels> price_levels;

  std::string trend_text;
  std::string mean_reversion_text;
  std::string rsi_text;
  std::string volatility_text;
  std::string volume_text;
  std::string price_levels_text;
};

TechnicalSummary summarize(std::span<const market::OhlcvBar> bars, const IndicatorParams& params = {});

}  // namespace livefund::indicators
