#pragma once

// Canonical JSON wire format: snake_case field names, ISO dates, enums as
// their canonical strings. This is the ledger and fixture format.

#include <json.hpp>

#include "livefund/domain/types.hpp"

namespace livefund {

using Json = nlohmann::ordered_json;

void to_json(Json& j, const Ticker& t);
void from_json(const Json& j, Ticker& t);
void to_json(Json& j, const Date& d);
void from_json(const Json& j, Date& d);

template <int P>
void to_json(Json& j, const Fixed<P>& v) {
  j = v.to_double();
}
template <int P>
void from_json(const Json& j, Fixed<P>& v) {
  if (j.is_string()) {
    v = Fixed<P>::parse(j.get<std::string>());
  } else if (j.is_number_integer()) {
    v = Fixed<P>::whole(j.get<std::int64_t>());
  } else {
    v = Fixed<P>::from_double(j.get<double>());
  }
}

void to_json(Json& j, SignalDirection d);
void from_json(const Json& j, SignalDirection& d);
void to_json(Json& j, DecisionAction a);
void from_json(const Json& j, DecisionAction& a);
void to_json(Json& j, AnalystKind k);
void from_json(const Json& j, AnalystKind& k);

void to_json(Json& j, const Signal& s);
void from_json(const Json& j, Signal& s);
void to_json(Json& j, const Decision& d);
void from_json(const Json& j, Decision& d);
void to_json(Json& j, const Position& p);
void from_json(const Json& j, Position& p);
void to_json(Json& j, const Portfolio& p);
void from_json(const Json& j, Portfolio& p);
void to_json(Json& j, const TradeRecord& t);
void from_json(const Json& j, TradeRecord& t);

}  // namespace livefund
