#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "livefund/domain/serialization.hpp"
#include "livefund/domain/types.hpp"

namespace livefund::market {

struct OhlcvBar {
  Date date;
  Price open, high, low, close;
  std::int64_t volume = 0;

  bool operator==(const OhlcvBar&) const = default;
};

enum class NewsScope { Company, Policy };

struct NewsItem {
  Date date;
  std::string headline;
  std::string summary;
  std::string source;
  NewsScope scope = NewsScope::Company;
  std::optional<Ticker> ticker;  // set iff scope == Company

  bool operator==(const NewsItem&) const = default;
};

enum class InsiderKind { InsiderBuy, InsiderSell };

struct InsiderTransaction {
  Date date;
  Ticker ticker;
  std::string insider_name;
  std::string role;
  InsiderKind kind = InsiderKind::InsiderBuy;
  std::int64_t shares = 0;
  Price price;

  bool operator==(const InsiderTransaction&) const = default;
};

struct FundamentalsSnapshot {
  Ticker ticker;
  Date period_end;
  Money revenue;
  Money net_income;
  double gross_margin = 0.0;
  double net_margin = 0.0;
  std::optional<double> pe_ratio;
  std::optional<double> pb_ratio;

  bool operator==(const FundamentalsSnapshot&) const = default;
};

struct MacroIndicator {
  std::string name;
  Date date;
  double value = 0.0;
  std::string unit;

  bool operator==(const MacroIndicator&) const = default;
};

/// Date used by the leakage guard.
inline Date record_date(const OhlcvBar& r) { return r.date; }
inline Date record_date(const NewsItem& r) { return r.date; }
inline Date record_date(const InsiderTransaction& r) { return r.date; }
inline Date record_date(const FundamentalsSnapshot& r) { return r.period_end; }
inline Date record_date(const MacroIndicator& r) { return r.date; }

/// Throw InvalidArgument naming the broken invariant.
void validate(const OhlcvBar& bar);
void validate(const NewsItem& item);
void validate(const InsiderTransaction& tx);
void validate(const FundamentalsSnapshot& snap);
void validate(const MacroIndicator& ind);

std::string_view to_string(InsiderKind k);

void to_json(Json& j, const OhlcvBar& r);
void from_json(const Json& j, OhlcvBar& r);
void to_json(Json& j, const NewsItem& r);
void from_json(const Json& j, NewsItem& r);
void to_json(Json& j, const InsiderTransaction& r);
void from_json(const Json& j, InsiderTransaction& r);
void to_json(Json& j, const FundamentalsSnapshot& r);
void from_json(const Json& j, FundamentalsSnapshot& r);
void to_json(Json& j, const MacroIndicator& r);
void from_json(const Json& j, MacroIndicator& r);

}  // namespace livefund::market
