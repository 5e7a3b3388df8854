#include "livefund/market/alpha_vantage_provider.hpp"

#include <algorithm>
#include <set>

#include "livefund/domain/error.hpp"

namespace livefund::market {

namespace {

double number_field(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return 0.0;
  if (it->is_number()) return it->get<double>();
  const auto text = it->get<std::string>();
  if (text.empty() || text == "None" || text == "-") return 0.0;
  return std::stod(text);
}

std::optional<double> optional_number(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_number()) return it->get<double>();
  const auto text = it->get<std::string>();
  if (text.empty() || text == "None" || text == "-") return std::nullopt;
  return std::stod(text);
}

std::string string_field(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  return (it == obj.end() || !it->is_string()) ? std::string{} : it->get<std::string>();
}

template <typename T>
std::vector<T> newest(std::vector<T> records, std::size_t limit) {
  std::stable_sort(records.begin(), records.end(),
                   [](const T& a, const T& b) { return record_date(a) < record_date(b); });
  if (records.size() > limit) records.erase(records.begin(), records.end() - static_cast<std::ptrdiff_t>(limit));
  return records;
}

std::vector<NewsItem> parse_feed(const Json& body, NewsScope scope, const std::optional<Ticker>& ticker) {
  std::vector<NewsItem> out;
  if (!body.contains("feed")) return out;
  for (const auto& item : body.at("feed")) {
    NewsItem n;
    const auto date = Date::try_parse(string_field(item, "time_published"));
    if (!date) continue;
    n.date = *date;
    n.headline = string_field(item, "title");
    if (n.headline.empty()) continue;
    n.summary = string_field(item, "summary");
    n.source = string_field(item, "source");
    n.scope = scope;
    n.ticker = ticker;
    out.push_back(std::move(n));
  }
  return out;
}

}  // namespace

AlphaVantageProvider::AlphaVantageProvider(AlphaVantageOptions options,
                                           std::shared_ptr<net::HttpTransport> transport)
    : options_(std::move(options)), transport_(std::move(transport)) {
  if (options_.api_key.empty()) raise(ErrorKind::MissingCredential, "Alpha Vantage API key is empty");
}

Json AlphaVantageProvider::query(const std::string& params) const {
  net::HttpRequest req;
  req.url = options_.base_url + "/query?" + params + "&apikey=" + net::url_encode(options_.api_key);
  req.timeout = options_.timeout;
  const auto res = net::send_with_retries(*transport_, req, options_.retry, options_.sleep);
  if (res.status != 200) {
    raise(ErrorKind::ProviderUnavailable, "Alpha Vantage returned HTTP " + std::to_string(res.status));
  }
  Json body;
  try {
    body = Json::parse(res.body);
  } catch (const std::exception& e) {
    raise(ErrorKind::ProviderUnavailable, std::string("unparseable Alpha Vantage response: ") + e.what());
  }
  if (body.contains("Error Message")) {
    raise(ErrorKind::UnknownTicker, body.at("Error Message").get<std::string>());
  }
  if (body.contains("Note") || body.contains("Information")) {
    const auto& msg = body.contains("Note") ? body.at("Note") : body.at("Information");
    raise(ErrorKind::ProviderUnavailable, "Alpha Vantage throttled: " + msg.dump());
  }
  return body;
}

bool AlphaVantageProvider::knows(const Ticker&) const { return true; }

std::vector<OhlcvBar> AlphaVantageProvider::ohlcv(const Ticker& ticker, Date, std::size_t limit) const {
  const auto body = query("function=TIME_SERIES_DAILY&symbol=" + net::url_encode(ticker.str()) +
                          "&outputsize=" + (limit > 100 ? "full" : "compact"));
  std::vector<OhlcvBar> bars;
  const auto series = body.find("Time Series (Daily)");
  if (series == body.end()) return bars;
  for (const auto& [day, row] : series->items()) {
    OhlcvBar b;
    b.date = Date::parse(day);
    b.open = Price::from_double(number_field(row, "1. open"));
    b.high = Price::from_double(number_field(row, "2. high"));
    b.low = Price::from_double(number_field(row, "3. low"));
    b.close = Price::from_double(number_field(row, "4. close"));
    b.volume = static_cast<std::int64_t>(number_field(row, "5. volume"));
    bars.push_back(b);
  }
  return newest(std::move(bars), limit);
}

std::vector<NewsItem> AlphaVantageProvider::company_news(const Ticker& ticker, Date,
                                                         std::size_t limit) const {
  const auto body = query("function=NEWS_SENTIMENT&sort=LATEST&tickers=" + net::url_encode(ticker.str()) +
                          "&limit=" + std::to_string(limit));
  return newest(parse_feed(body, NewsScope::Company, ticker), limit);
}

std::vector<NewsItem> AlphaVantageProvider::policy_news(Date, std::size_t limit) const {
  const auto body = query("function=NEWS_SENTIMENT&sort=LATEST&topics=economy_fiscal,economy_monetary&limit=" +
                          std::to_string(limit));
  return newest(parse_feed(body, NewsScope::Policy, std::nullopt), limit);
}

std::vector<InsiderTransaction> AlphaVantageProvider::insider(const Ticker& ticker, Date,
                                                              std::size_t limit) const {
  const auto body = query("function=INSIDER_TRANSACTIONS&symbol=" + net::url_encode(ticker.str()));
  std::vector<InsiderTransaction> out;
  if (!body.contains("data")) return out;
  for (const auto& row : body.at("data")) {
    const auto date = Date::try_parse(string_field(row, "transaction_date"));
    const auto shares = static_cast<std::int64_t>(number_field(row, "shares"));
    const double price = number_field(row, "share_price");
    // Grants and option exercises report zero price; they carry no signal.
    if (!date || shares < 1 || price <= 0.0) continue;
    InsiderTransaction tx;
    tx.date = *date;
    tx.ticker = ticker;
    tx.insider_name = string_field(row, "executive");
    tx.role = string_field(row, "executive_title");
    tx.kind = string_field(row, "acquisition_or_disposal") == "D" ? InsiderKind::InsiderSell
                                                                  : InsiderKind::InsiderBuy;
    tx.shares = shares;
    tx.price = Price::from_double(price);
    out.push_back(std::move(tx));
  }
  return newest(std::move(out), limit);
}

std::vector<FundamentalsSnapshot> AlphaVantageProvider::fundamentals(const Ticker& ticker, Date) const {
  const auto income = query("function=INCOME_STATEMENT&symbol=" + net::url_encode(ticker.str()));
  std::vector<FundamentalsSnapshot> out;
  if (!income.contains("quarterlyReports")) return out;
  for (const auto& row : income.at("quarterlyReports")) {
    const auto date = Date::try_parse(string_field(row, "fiscalDateEnding"));
    if (!date) continue;
    FundamentalsSnapshot s;
    s.ticker = ticker;
    s.period_end = *date;
    const double revenue = number_field(row, "totalRevenue");
    const double gross = number_field(row, "grossProfit");
    const double net = number_field(row, "netIncome");
    s.revenue = Money::from_double(revenue);
    s.net_income = Money::from_double(net);
    s.gross_margin = revenue != 0.0 ? std::clamp(gross / revenue, -1.0, 10.0) : 0.0;
    s.net_margin = revenue != 0.0 ? std::clamp(net / revenue, -1.0, 10.0) : 0.0;
    out.push_back(std::move(s));
  }
  out = newest(std::move(out), out.size());
  if (!out.empty()) {
    const auto overview = query("function=OVERVIEW&symbol=" + net::url_encode(ticker.str()));
    out.back().pe_ratio = optional_number(overview, "PERatio");
    out.back().pb_ratio = optional_number(overview, "PriceToBookRatio");
  }
  return out;
}

std::vector<MacroIndicator> AlphaVantageProvider::macro(Date, std::size_t limit) const {
  static constexpr const char* kFunctions[] = {"REAL_GDP", "CPI", "UNEMPLOYMENT", "FEDERAL_FUNDS_RATE"};
  const std::size_t per_series = std::max<std::size_t>(1, limit / std::size(kFunctions));
  std::vector<MacroIndicator> out;
  for (const char* fn : kFunctions) {
    const auto body = query(std::string("function=") + fn);
    if (!body.contains("data")) continue;
    std::vector<MacroIndicator> series;
    for (const auto& row : body.at("data")) {
      const auto date = Date::try_parse(string_field(row, "date"));
      const auto value = optional_number(row, "value");
      if (!date || !value) continue;
      series.push_back(MacroIndicator{string_field(body, "name").empty() ? fn : string_field(body, "name"),
                                      *date, *value, string_field(body, "unit")});
    }
    for (auto& m : newest(std::move(series), per_series)) out.push_back(std::move(m));
  }
  return newest(std::move(out), limit);
}

std::vector<Date> AlphaVantageProvider::trading_days(const std::vector<Ticker>& tickers, Date from,
                                                     Date to) const {
  std::set<Date> days;
  for (const auto& t : tickers) {
    for (const auto& bar : ohlcv(t, to, 5000)) {
      if (bar.date >= from && bar.date <= to) days.insert(bar.date);
    }
  }
  return {days.begin(), days.end()};
}

}  // namespace livefund::market
