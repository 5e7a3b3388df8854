#include "livefund/market/records.hpp"

#include "livefund/domain/error.hpp"

namespace livefund::market {

namespace {
void require(bool ok, const std::string& what) {
  if (!ok) raise(ErrorKind::InvalidArgument, what);
}

template <typename T>
void opt_to_json(Json& j, const char* key, const std::optional<T>& v) {
  if (v) {
    j[key] = *v;
  } else {
    j[key] = nullptr;
  }
}

std::optional<double> opt_double(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}
}  // namespace

void validate(const OhlcvBar& bar) {
  const std::string at = " (bar " + bar.date.iso() + ")";
  require(bar.open.is_positive() && bar.high.is_positive() && bar.low.is_positive() &&
              bar.close.is_positive(),
          "prices must be positive" + at);
  require(bar.low <= bar.high, "low <= high violated" + at);
  require(bar.low <= bar.open && bar.open <= bar.high, "low <= open <= high violated" + at);
  require(bar.low <= bar.close && bar.close <= bar.high, "low <= close <= high violated" + at);
  require(bar.volume >= 0, "volume must be non-negative" + at);
}

void validate(const NewsItem& item) {
  require(!item.headline.empty(), "news headline must be non-empty (" + item.date.iso() + ")");
  if (item.scope == NewsScope::Policy) {
    require(!item.ticker.has_value(), "policy news must not carry a ticker");
  } else {
    require(item.ticker.has_value(), "company news must carry a ticker");
  }
}

void validate(const InsiderTransaction& tx) {
  require(tx.shares >= 1, "insider transaction shares must be >= 1 (" + tx.date.iso() + ")");
  require(tx.price.is_positive(), "insider transaction price must be positive");
}

void validate(const FundamentalsSnapshot& snap) {
  auto in_range = [](double m) { return m >= -1.0 && m <= 10.0; };
  require(in_range(snap.gross_margin) && in_range(snap.net_margin),
          "margins must lie in [-1, 10] (" + snap.period_end.iso() + ")");
}

void validate(const MacroIndicator& ind) { require(!ind.name.empty(), "macro indicator needs a name"); }

std::string_view to_string(InsiderKind k) {
  return k == InsiderKind::InsiderBuy ? "InsiderBuy" : "InsiderSell";
}

void to_json(Json& j, const OhlcvBar& r) {
  j = Json{{"date", r.date}, {"open", r.open},   {"high", r.high},
           {"low", r.low},   {"close", r.close}, {"volume", r.volume}};
}

void from_json(const Json& j, OhlcvBar& r) {
  r.date = j.at("date").get<Date>();
  r.open = j.at("open").get<Price>();
  r.high = j.at("high").get<Price>();
  r.low = j.at("low").get<Price>();
  r.close = j.at("close").get<Price>();
  r.volume = j.at("volume").get<std::int64_t>();
}

void to_json(Json& j, const NewsItem& r) {
  j = Json{{"date", r.date},
           {"headline", r.headline},
           {"summary", r.summary},
           {"source", r.source},
           {"scope", r.scope == NewsScope::Company ? "Company" : "Policy"}};
  if (r.ticker) j["ticker"] = *r.ticker;
}

void from_json(const Json& j, NewsItem& r) {
  r.date = j.at("date").get<Date>();
  r.headline = j.at("headline").get<std::string>();
  r.summary = j.value("summary", std::string{});
  r.source = j.value("source", std::string{});
  const auto scope = j.at("scope").get<std::string>();
  if (scope == "Company") {
    r.scope = NewsScope::Company;
  } else if (scope == "Policy") {
    r.scope = NewsScope::Policy;
  } else {
    raise(ErrorKind::InvalidArgument, "unknown news scope '" + scope + "'");
  }
  r.ticker.reset();
  if (j.contains("ticker") && !j.at("ticker").is_null()) r.ticker = j.at("ticker").get<Ticker>();
}

void to_json(Json& j, const InsiderTransaction& r) {
  j = Json{{"date", r.date},
           {"ticker", r.ticker},
           {"insider_name", r.insider_name},
           {"role", r.role},
           {"kind", std::string(to_string(r.kind))},
           {"shares", r.shares},
           {"price", r.price}};
}

void from_json(const Json& j, InsiderTransaction& r) {
  r.date = j.at("date").get<Date>();
  r.ticker = j.at("ticker").get<Ticker>();
  r.insider_name = j.value("insider_name", std::string{});
  r.role = j.value("role", std::string{});
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "InsiderBuy") {
    r.kind = InsiderKind::InsiderBuy;
  } else if (kind == "InsiderSell") {
    r.kind = InsiderKind::InsiderSell;
  } else {
    raise(ErrorKind::InvalidArgument, "unknown insider kind '" + kind + "'");
  }
  r.shares = j.at("shares").get<std::int64_t>();
  r.price = j.at("price").get<Price>();
}

void to_json(Json& j, const FundamentalsSnapshot& r) {
  j = Json{{"ticker", r.ticker},
           {"period_end", r.period_end},
           {"revenue", r.revenue},
           {"net_income", r.net_income},
           {"gross_margin", r.gross_margin},
           {"net_margin", r.net_margin}};
  opt_to_json(j, "pe_ratio", r.pe_ratio);
  opt_to_json(j, "pb_ratio", r.pb_ratio);
}

void from_json(const Json& j, FundamentalsSnapshot& r) {
  r.ticker = j.at("ticker").get<Ticker>();
  r.period_end = j.at("period_end").get<Date>();
  r.revenue = j.at("revenue").get<Money>();
  r.net_income = j.at("net_income").get<Money>();
  r.gross_margin = j.at("gross_margin").get<double>();
  r.net_margin = j.at("net_margin").get<double>();
  r.pe_ratio = opt_double(j, "pe_ratio");
  r.pb_ratio = opt_double(j, "pb_ratio");
}

void to_json(Json& j, const MacroIndicator& r) {
  j = Json{{"name", r.name}, {"date", r.date}, {"value", r.value}, {"unit", r.unit}};
}

void from_json(const Json& j, MacroIndicator& r) {
  r.name = j.at("name").get<std::string>();
  r.date = j.at("date").get<Date>();
  r.value = j.at("value").get<double>();
  r.unit = j.value("unit", std::string{});
}

}  // namespace livefund::market
