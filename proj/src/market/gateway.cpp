#include "livefund/market/gateway.hpp"

#include <algorithm>
#include <any>
#include <cstdlib>
#include <map>
#include <mutex>

#include "livefund/domain/error.hpp"
#include "livefund/market/alpha_vantage_provider.hpp"
#include "livefund/market/replay_provider.hpp"

namespace livefund::market {

struct MarketGateway::Cache {
  std::mutex mutex;
  std::map<std::string, std::any> entries;
};

namespace {

template <typename Record>
void guard(const std::vector<Record>& records, const SimulationClock& clock, std::string_view what) {
  for (const auto& r : records) {
    if (record_date(r) > clock.current_date()) {
      raise(ErrorKind::LeakageViolation,
            std::string(what) + " record dated " + record_date(r).iso() + " served at simulation date " +
                clock.current_date().iso());
    }
  }
}

template <typename Record>
std::vector<Record> newest_first(std::vector<Record> records, std::size_t count) {
  std::reverse(records.begin(), records.end());
  std::stable_sort(records.begin(), records.end(),
                   [](const Record& a, const Record& b) { return record_date(a) > record_date(b); });
  if (records.size() > count) records.resize(count);
  return records;
}

std::string cache_key(std::string_view op, const std::string& ticker, std::size_t n, Date d) {
  return std::string(op) + "|" + ticker + "|" + std::to_string(n) + "|" + d.iso();
}

}  // namespace

MarketGateway::MarketGateway(std::shared_ptr<const MarketDataProvider> provider, bool cache)
    : provider_(std::move(provider)), cache_(cache ? std::make_shared<Cache>() : nullptr) {
  if (!provider_) raise(ErrorKind::InvalidArgument, "gateway needs a provider");
}

template <typename T, typename Fn>
T MarketGateway::memoize(const std::string& key, Fn&& compute) const {
  if (!cache_) return compute();
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->entries.find(key); it != cache_->entries.end()) {
      return std::any_cast<T>(it->second);
    }
  }
  T value = compute();
  std::lock_guard lock(cache_->mutex);
  cache_->entries.emplace(key, value);
  return value;
}

std::vector<OhlcvBar> MarketGateway::fetch_ohlcv(const Ticker& ticker, std::size_t window,
                                                 const SimulationClock& clock) const {
  if (window < 2) raise(ErrorKind::InvalidArgument, "OHLCV window must be >= 2");
  auto compute = [&] {
    auto bars = provider_->ohlcv(ticker, clock.current_date(), window);
    guard(bars, clock, "OHLCV " + ticker.str());
    std::stable_sort(bars.begin(), bars.end(),
                     [](const OhlcvBar& a, const OhlcvBar& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < bars.size(); ++i) {
      if (bars[i].date == bars[i - 1].date) {
        raise(ErrorKind::FixtureError, "duplicate OHLCV bar for " + ticker.str() + " on " + bars[i].date.iso());
      }
    }
    if (bars.size() > window) bars.erase(bars.begin(), bars.end() - static_cast<std::ptrdiff_t>(window));
    return bars;
  };
  return memoize<std::vector<OhlcvBar>>(cache_key("ohlcv", ticker.str(), window, clock.current_date()), compute);
}

std::vector<NewsItem> MarketGateway::fetch_company_news(const Ticker& ticker, std::size_t count,
                                                        const SimulationClock& clock) const {
  if (count < 1) raise(ErrorKind::InvalidArgument, "news count must be >= 1");
  auto compute = [&] {
    auto items = provider_->company_news(ticker, clock.current_date(), count);
    guard(items, clock, "company news " + ticker.str());
    items.erase(std::remove_if(items.begin(), items.end(),
                               [](const NewsItem& n) { return n.scope != NewsScope::Company; }),
                items.end());
    return newest_first(std::move(items), count);
  };
  return memoize<std::vector<NewsItem>>(cache_key("news", ticker.str(), count, clock.current_date()), compute);
}

std::vector<NewsItem> MarketGateway::fetch_policy_news(std::size_t count,
                                                       const SimulationClock& clock) const {
  if (count < 1) raise(ErrorKind::InvalidArgument, "news count must be >= 1");
  auto compute = [&] {
    auto items = provider_->policy_news(clock.current_date(), count);
    guard(items, clock, "policy news");
    items.erase(std::remove_if(items.begin(), items.end(),
                               [](const NewsItem& n) { return n.scope != NewsScope::Policy; }),
                items.end());
    return newest_first(std::move(items), count);
  };
  return memoize<std::vector<NewsItem>>(cache_key("policy", "", count, clock.current_date()), compute);
}

std::vector<InsiderTransaction> MarketGateway::fetch_insider(const Ticker& ticker, std::size_t count,
                                                             const SimulationClock& clock) const {
  if (count < 1) raise(ErrorKind::InvalidArgument, "insider count must be >= 1");
  auto compute = [&] {
    auto txs = provider_->insider(ticker, clock.current_date(), count);
    guard(txs, clock, "insider " + ticker.str());
    return newest_first(std::move(txs), count);
  };
  return memoize<std::vector<InsiderTransaction>>(cache_key("insider", ticker.str(), count, clock.current_date()), compute);
}

std::optional<FundamentalsSnapshot> MarketGateway::fetch_fundamentals(
    const Ticker& ticker, const SimulationClock& clock) const {
  auto compute = [&]() -> std::optional<FundamentalsSnapshot> {
    const auto snaps = provider_->fundamentals(ticker, clock.current_date());
    guard(snaps, clock, "fundamentals " + ticker.str());
    if (snaps.empty()) return std::nullopt;
    // Latest period wins; among equal periods, the last delivered.
    const FundamentalsSnapshot* best = &snaps.front();
    for (const auto& s : snaps) {
      if (s.period_end >= best->period_end) best = &s;
    }
    return *best;
  };
  return memoize<std::optional<FundamentalsSnapshot>>(cache_key("fundamentals", ticker.str(), 0, clock.current_date()), compute);
}

std::vector<MacroIndicator> MarketGateway::fetch_macro(std::size_t count,
                                                       const SimulationClock& clock) const {
  if (count < 1) raise(ErrorKind::InvalidArgument, "macro count must be >= 1");
  auto compute = [&] {
    auto inds = provider_->macro(clock.current_date(), count);
    guard(inds, clock, "macro");
    return newest_first(std::move(inds), count);
  };
  return memoize<std::vector<MacroIndicator>>(cache_key("macro", "", count, clock.current_date()), compute);
}

Price MarketGateway::fetch_price(const Ticker& ticker, const SimulationClock& clock) const {
  const auto bars = fetch_ohlcv(ticker, 2, clock);
  if (bars.empty()) {
    raise(ErrorKind::NoPriceAvailable,
          "no bar for " + ticker.str() + " on or before " + clock.current_date().iso());
  }
  return bars.back().close;
}

std::vector<Date> MarketGateway::trading_days(const std::vector<Ticker>& tickers, Date from,
                                              Date to) const {
  return provider_->trading_days(tickers, from, to);
}

MarketGateway register_provider(const ProviderConfig& config,
                                std::shared_ptr<net::HttpTransport> transport, net::Sleeper sleep) {
  if (config.kind == "replay") {
    return MarketGateway(std::make_shared<ReplayProvider>(config.fixture_dir), config.cache);
  }
  if (config.kind == "alpha-vantage") {
    const std::string env = config.api_key_env.empty() ? "ALPHAVANTAGE_API_KEY" : config.api_key_env;
    const char* key = std::getenv(env.c_str());
    if (key == nullptr || *key == '\0') {
      raise(ErrorKind::MissingCredential, "environment variable " + env + " is not set");
    }
    AlphaVantageOptions options;
    if (!config.base_url.empty()) options.base_url = config.base_url;
    options.api_key = key;
    options.retry = config.retry;
    options.sleep = std::move(sleep);
    if (!transport) transport = net::make_http_transport();
    return MarketGateway(std::make_shared<AlphaVantageProvider>(std::move(options), std::move(transport)),
                         config.cache);
  }
  raise(ErrorKind::UnknownProviderKind, "unknown market data provider kind '" + config.kind + "'");
}

}  // namespace livefund::market
