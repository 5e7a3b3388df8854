#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "livefund/market/clock.hpp"
#include "livefund/market/http_client.hpp"
#include "livefund/market/provider.hpp"

namespace livefund::market {

/// Default data volumes per analyst request.
struct DataWindows {
  std::size_t technical_window = 100;
  std::size_t news_count = 10;
  std::size_t insider_count = 10;
  std::size_t macro_count = 10;
};

/// Leakage-guarded front door to a provider. Every record handed out is
/// dated on or before the clock; a provider that returns anything later is
/// reported with LeakageViolation instead of being filtered.
///
/// Safe for concurrent fetches. Copies share the provider and cache.
class MarketGateway {
 public:
  explicit MarketGateway(std::shared_ptr<const MarketDataProvider> provider, bool cache = false);

  /// Up to `window` bars, strictly ascending, ending at or before the clock.
  std::vector<OhlcvBar> fetch_ohlcv(const Ticker& ticker, std::size_t window,
                                    const SimulationClock& clock) const;
  /// Newest first.
  std::vector<NewsItem> fetch_company_news(const Ticker& ticker, std::size_t count,
                                           const SimulationClock& clock) const;
  std::vector<NewsItem> fetch_policy_news(std::size_t count, const SimulationClock& clock) const;
  std::vector<InsiderTransaction> fetch_insider(const Ticker& ticker, std::size_t count,
                                                const SimulationClock& clock) const;
  std::optional<FundamentalsSnapshot> fetch_fundamentals(const Ticker& ticker,
                                                         const SimulationClock& clock) const;
  std::vector<MacroIndicator> fetch_macro(std::size_t count, const SimulationClock& clock) const;
  /// Close on the clock date, carried forward over non-trading days.
  Price fetch_price(const Ticker& ticker, const SimulationClock& clock) const;

  std::vector<Date> trading_days(const std::vector<Ticker>& tickers, Date from, Date to) const;
  bool knows(const Ticker& ticker) const { return provider_->knows(ticker); }

  const MarketDataProvider& provider() const { return *provider_; }

 private:
  struct Cache;

  template <typename T, typename Fn>
  T memoize(const std::string& key, Fn&& compute) const;

  std::shared_ptr<const MarketDataProvider> provider_;
  std::shared_ptr<Cache> cache_;
};

struct ProviderConfig {
  std::string kind;  // "replay" or "alpha-vantage"
  std::filesystem::path fixture_dir;
  std::string base_url;
  std::string api_key_env;
  net::RetryPolicy retry;
  bool cache = false;
};

/// Builds a gateway for a provider kind. Live kinds read their key from the
/// configured environment variable.
MarketGateway register_provider(const ProviderConfig& config,
                                std::shared_ptr<net::HttpTransport> transport = nullptr,
                                net::Sleeper sleep = net::real_sleep);

}  // namespace livefund::market
