#include "livefund/indicators/technical.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "livefund/domain/error.hpp"

namespace livefund::indicators {

namespace {

constexpr std::string_view kInsufficient = "insufficient history";

void need(bool ok, const std::string& what) {
  if (!ok) raise(ErrorKind::InsufficientHistory, what);
}

double mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::span<const double> tail(std::span<const double> xs, std::size_t n) { return xs.subspan(xs.size() - n); }

}  // namespace

std::string_view to_string(TrendLabel label) {
  switch (label) {
    case TrendLabel::Uptrend: return "Uptrend";
    case TrendLabel::Downtrend: return "Downtrend";
    case TrendLabel::Flat: return "Flat";
  }
  return "Flat";
}

double compute_rsi(std::span<const double> closes, std::size_t period) {
  if (period == 0) raise(ErrorKind::InvalidArgument, "RSI period must be positive");
  need(closes.size() >= period + 1, "RSI needs period + 1 closes");
  double avg_gain = 0.0;
  double avg_loss = 0.0;
  for (std::size_t i = 1; i <= period; ++i) {
    const double change = closes[i] - closes[i - 1];
    avg_gain += std::max(change, 0.0);
    avg_loss += std::max(-change, 0.0);
  }
  const auto n = static_cast<double>(period);
  avg_gain /= n;
  avg_loss /= n;
  for (std::size_t i = period + 1; i < closes.size(); ++i) {
    const double change = closes[i] - closes[i - 1];
    avg_gain = (avg_gain * (n - 1.0) + std::max(change, 0.0)) / n;
    avg_loss = (avg_loss * (n - 1.0) + std::max(-change, 0.0)) / n;
  }
  if (avg_loss == 0.0) return avg_gain == 0.0 ? 50.0 : 100.0;
  if (avg_gain == 0.0) return 0.0;
  const double rsi = 100.0 - 100.0 / (1.0 + avg_gain / avg_loss);
  return std::clamp(rsi, 0.0, 100.0);
}

TrendReading compute_trend(std::span<const double> closes, std::size_t short_window,
                           std::size_t long_window, double epsilon) {
  if (short_window == 0 || short_window >= long_window) {
    raise(ErrorKind::InvalidArgument, "trend needs 0 < short window < long window");
  }
  need(closes.size() >= long_window, "trend needs long_window closes");
  TrendReading r;
  r.short_sma = mean(tail(closes, short_window));
  r.long_sma = mean(tail(closes, long_window));
  if (r.short_sma > r.long_sma * (1.0 + epsilon)) {
    r.label = TrendLabel::Uptrend;
  } else if (r.short_sma < r.long_sma * (1.0 - epsilon)) {
    r.label = TrendLabel::Downtrend;
  } else {
    r.label = TrendLabel::Flat;
  }
  return r;
}

double compute_mean_reversion(std::span<const double> closes, std::size_t window) {
  need(window >= 2 && closes.size() >= window, "mean reversion needs window >= 2 closes");
  const auto w = tail(closes, window);
  if (std::all_of(w.begin(), w.end(), [&](double x) { return x == w.front(); })) return 0.0;
  const double sd = sample_std(w);
  if (sd == 0.0) return 0.0;
  return (w.back() - mean(w)) / sd;
}

double compute_volatility(std::span<const double> closes, std::size_t window) {
  need(window >= 2, "volatility needs at least two returns");
  need(closes.size() >= window + 1, "volatility needs window + 1 closes");
  const auto w = tail(closes, window + 1);
  std::vector<double> returns(window);
  for (std::size_t i = 0; i < window; ++i) returns[i] = std::log(w[i + 1] / w[i]);
  return sample_std(returns) * std::sqrt(252.0);
}

double compute_volume_ratio(std::span<const double> volumes, std::size_t window) {
  need(window >= 1 && volumes.size() >= window + 1, "volume ratio needs window + 1 volumes");
  const auto history = volumes.subspan(volumes.size() - window - 1, window);
  const double avg = mean(history);
  if (avg <= 0.0) raise(ErrorKind::ZeroAverageVolume, "average volume is zero");
  return volumes.back() / avg;
}

PriceLevels compute_price_levels(std::span<const market::OhlcvBar> bars, std::size_t window) {
  need(window >= 1 && bars.size() >= window, "price levels need window bars");
  const auto w = bars.subspan(bars.size() - window);
  PriceLevels levels{w.front().low, w.front().high};
  for (const auto& b : w) {
    levels.support = std::min(levels.support, b.low);
    levels.resistance = std::max(levels.resistance, b.high);
  }
  return levels;
}

TechnicalSummary summarize(std::span<const market::OhlcvBar> bars, const IndicatorParams& p) {
  std::vector<double> closes;
  std::vector<double> volumes;
  closes.reserve(bars.size());
  volumes.reserve(bars.size());
  for (const auto& b : bars) {
    closes.push_back(b.close.to_double());
    volumes.push_back(static_cast<double>(b.volume));
  }

  TechnicalSummary s;
  const std::size_t n = closes.size();
  if (n >= p.trend_long) {
    s.trend = compute_trend(closes, p.trend_short, p.trend_long, p.trend_epsilon);
    s.trend_text = fmt::format("{} ({}-day SMA {:.2f} vs {}-day SMA {:.2f})", to_string(s.trend->label),
                               p.trend_short, s.trend->short_sma, p.trend_long, s.trend->long_sma);
  } else {
    s.trend_text = kInsufficient;
  }

  if (n >= p.mean_reversion_window && p.mean_reversion_window >= 2) {
    s.mean_reversion_z = compute_mean_reversion(closes, p.mean_reversion_window);
    const double m = mean(tail(closes, p.mean_reversion_window));
    s.mean_reversion_text = fmt::format("z-score {:.2f} against the {}-day mean of {:.2f}",
                                        *s.mean_reversion_z, p.mean_reversion_window, m);
  } else {
    s.mean_reversion_text = kInsufficient;
  }

  if (n >= p.rsi_period + 1) {
    s.rsi = compute_rsi(closes, p.rsi_period);
    s.rsi_text = fmt::format("{:.1f} ({}-day)", *s.rsi, p.rsi_period);
  } else {
    s.rsi_text = kInsufficient;
  }

  if (n >= p.volatility_window + 1 && p.volatility_window >= 2) {
    s.volatility = compute_volatility(closes, p.volatility_window);
    s.volatility_text =
        fmt::format("{:.2f}% annualized over {} days", *s.volatility * 100.0, p.volatility_window);
  } else {
    s.volatility_text = kInsufficient;
  }

  if (n >= p.volume_window + 1) {
    try {
      s.volume_ratio = compute_volume_ratio(volumes, p.volume_window);
      s.volume_text = fmt::format("latest volume {:.2f}x the {}-day average", *s.volume_ratio,
                                  p.volume_window);
    } catch (const Error&) {
      s.volume_text = "no trading volume recorded";
    }
  } else {
    s.volume_text = kInsufficient;
  }

  if (n >= 1) {
    const std::size_t w = std::min(p.levels_window, n);
    s.price_levels = compute_price_levels(bars, w);
    s.price_levels_text = fmt::format("support {:.2f}, resistance {:.2f} ({}-day range)",
                                      s.price_levels->support.to_double(),
                                      s.price_levels->resistance.to_double(), w);
  } else {
    s.price_levels_text = kInsufficient;
  }
  return s;
}

}  // namespace livefund::indicators
