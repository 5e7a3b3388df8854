#include "livefund/domain/money.hpp"

#include <cmath>
#include <limits>

#include "livefund/domain/error.hpp"

namespace livefund {
namespace detail {

std::int64_t parse_decimal_units(std::string_view text, int places) {
  const std::string original(text);
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) raise(ErrorKind::InvalidArgument, "empty decimal '" + original + "'");

  std::int64_t whole = 0;
  std::int64_t frac = 0;
  int frac_digits = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_point) raise(ErrorKind::InvalidArgument, "malformed decimal '" + original + "'");
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') raise(ErrorKind::InvalidArgument, "malformed decimal '" + original + "'");
    seen_digit = true;
    const int d = c - '0';
    if (seen_point) {
      if (frac_digits == places) {
        if (d != 0) {
          raise(ErrorKind::InvalidArgument,
                "decimal '" + original + "' exceeds " + std::to_string(places) + " places");
        }
        continue;
      }
      frac = frac * 10 + d;
      ++frac_digits;
    } else {
      if (whole > (std::numeric_limits<std::int64_t>::max() / 10 - 9) / pow10(places)) {
        raise(ErrorKind::InvalidArgument, "decimal '" + original + "' out of range");
      }
      whole = whole * 10 + d;
    }
  }
  if (!seen_digit) raise(ErrorKind::InvalidArgument, "malformed decimal '" + original + "'");
  for (int i = frac_digits; i < places; ++i) frac *= 10;
  const std::int64_t units = whole * pow10(places) + frac;
  return negative ? -units : units;
}

std::int64_t round_double_units(double value, int places) {
  if (!std::isfinite(value)) raise(ErrorKind::InvalidArgument, "non-finite decimal value");
  const double scaled = value * static_cast<double>(pow10(places));
  if (std::fabs(scaled) > 9.0e17) raise(ErrorKind::InvalidArgument, "decimal value out of range");
  return static_cast<std::int64_t>(std::llround(scaled));
}

std::string format_units(std::int64_t units, int places) {
  const bool negative = units < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(units + 1)) + 1u
                                     : static_cast<std::uint64_t>(units);
  const auto scale = static_cast<std::uint64_t>(pow10(places));
  std::string out = negative ? "-" : "";
  out += std::to_string(mag / scale);
  if (places > 0) {
    std::string frac = std::to_string(mag % scale);
    out += '.';
    out.append(static_cast<std::size_t>(places) - frac.size(), '0');
    out += frac;
  }
  return out;
}

}  // namespace detail

namespace {
// Price units are 10^-4, money units 10^-2.
constexpr std::int64_t kPriceToMoney = Price::kScale / Money::kScale;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
}  // namespace

Money notional(std::int64_t shares, Price price) {
  const std::int64_t ticks = shares * price.units();
  const std::int64_t half = kPriceToMoney / 2;
  const std::int64_t cents = ticks >= 0 ? (ticks + half) / kPriceToMoney : -((-ticks + half) / kPriceToMoney);
  return Money::from_units(cents);
}

std::int64_t affordable_shares(Money cash, Price price) {
  if (!price.is_positive()) raise(ErrorKind::InvalidArgument, "price must be positive");
  if (cash.units() <= 0) return 0;
  return floor_div(cash.units() * kPriceToMoney, price.units());
}

std::int64_t floor_shares(Money value, Price price) {
  if (!price.is_positive()) raise(ErrorKind::InvalidArgument, "price must be positive");
  return floor_div(value.units() * kPriceToMoney, price.units());
}

Price to_price(Money m) { return Price::from_units(m.units() * kPriceToMoney); }

}  // namespace livefund
