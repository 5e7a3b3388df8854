#pragma once

#include <memory>
#include <string>

#include "livefund/market/http_client.hpp"
#include "livefund/market/provider.hpp"

namespace livefund::market {

struct AlphaVantageOptions {
  std::string base_url = "https://www.alphavantage.co";
  std::string api_key;
  net::RetryPolicy retry;
  net::Sleeper sleep = net::real_sleep;
  std::chrono::seconds timeout{30};
};

/// Live provider speaking the Alpha Vantage query API. It returns whatever
/// the service reports as current; it never filters by `as_of`.
class AlphaVantageProvider final : public MarketDataProvider {
 public:
  AlphaVantageProvider(AlphaVantageOptions options, std::shared_ptr<net::HttpTransport> transport);

  bool knows(const Ticker& ticker) const override;
  std::vector<OhlcvBar> ohlcv(const Ticker& ticker, Date as_of, std::size_t limit) const override;
  std::vector<NewsItem> company_news(const Ticker& ticker, Date as_of,
                                     std::size_t limit) const override;
  std::vector<NewsItem> policy_news(Date as_of, std::size_t limit) const override;
  std::vector<InsiderTransaction> insider(const Ticker& ticker, Date as_of,
                                          std::size_t limit) const override;
  std::vector<FundamentalsSnapshot> fundamentals(const Ticker& ticker, Date as_of) const override;
  std::vector<MacroIndicator> macro(Date as_of, std::size_t limit) const override;
  std::vector<Date> trading_days(const std::vector<Ticker>& tickers, Date from,
                                 Date to) const override;

 private:
  Json query(const std::string& params) const;

  AlphaVantageOptions options_;
  std::shared_ptr<net::HttpTransport> transport_;
};

}  // namespace livefund::market
