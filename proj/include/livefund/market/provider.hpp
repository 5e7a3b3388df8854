#pragma once

#include <cstddef>
#include <vector>

#include "livefund/market/records.hpp"

namespace livefund::market {

/// A source of upstream market data. Implementations answer "as of" a date
/// but are not trusted: the gateway re-checks every returned record.
///
/// List results come oldest first; `limit` keeps the newest `limit` records.
class MarketDataProvider {
 public:
  virtual ~MarketDataProvider() = default;

  virtual bool knows(const Ticker& ticker) const = 0;

  virtual std::vector<OhlcvBar> ohlcv(const Ticker& ticker, Date as_of, std::size_t limit) const = 0;
  virtual std::vector<NewsItem> company_news(const Ticker& ticker, Date as_of,
                                             std::size_t limit) const = 0;
  virtual std::vector<NewsItem> policy_news(Date as_of, std::size_t limit) const = 0;
  virtual std::vector<InsiderTransaction> insider(const Ticker& ticker, Date as_of,
                                                  std::size_t limit) const = 0;
  virtual std::vector<FundamentalsSnapshot> fundamentals(const Ticker& ticker, Date as_of) const = 0;
  virtual std::vector<MacroIndicator> macro(Date as_of, std::size_t limit) const = 0;

  /// Dates with at least one bar for any of `tickers`, ascending, in [from, to].
  virtual std::vector<Date> trading_days(const std::vector<Ticker>& tickers, Date from,
                                         Date to) const = 0;
};

}  // namespace livefund::market
