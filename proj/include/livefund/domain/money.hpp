#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace livefund {

namespace detail {
constexpr std::int64_t pow10(int n) {
  std::int64_t v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

std::int64_t parse_decimal_units(std::string_view text, int places);
std::int64_t round_double_units(double value, int places);
std::string format_units(std::int64_t units, int places);
}  // namespace detail

/// Exact decimal quantity stored as an integer count of 10^-Places units.
/// Ledger arithmetic never touches floating point.
template <int Places>
class Fixed {
 public:
  static constexpr int kPlaces = Places;
  static constexpr std::int64_t kScale = detail::pow10(Places);

  constexpr Fixed() = default;

  static constexpr Fixed from_units(std::int64_t units) {
    Fixed f;
    f.units_ = units;
    return f;
  }
  static constexpr Fixed whole(std::int64_t value) { return from_units(value * kScale); }
  /// Rounds half away from zero to the nearest unit.
  static Fixed from_double(double value) {
    return from_units(detail::round_double_units(value, Places));
  }
  /// Exact parse of a decimal literal such as "156.12" or "-3". More
  /// fractional digits than Places is an error.
  static Fixed parse(std::string_view text) {
    return from_units(detail::parse_decimal_units(text, Places));
  }

  constexpr std::int64_t units() const { return units_; }
  double to_double() const { return static_cast<double>(units_) / static_cast<double>(kScale); }
  std::string to_string() const { return detail::format_units(units_, Places); }

  constexpr bool is_zero() const { return units_ == 0; }
  constexpr bool is_negative() const { return units_ < 0; }
  constexpr bool is_positive() const { return units_ > 0; }

  constexpr Fixed operator+(Fixed o) const { return from_units(units_ + o.units_); }
  constexpr Fixed operator-(Fixed o) const { return from_units(units_ - o.units_); }
  constexpr Fixed operator-() const { return from_units(-units_); }
  constexpr Fixed& operator+=(Fixed o) {
    units_ += o.units_;
    return *this;
  }
  constexpr Fixed& operator-=(Fixed o) {
    units_ -= o.units_;
    return *this;
  }

  constexpr auto operator<=>(const Fixed&) const = default;

 private:
  std::int64_t units_ = 0;
};

/// Cash amounts, cent precision.
using Money = Fixed<2>;
/// Per-share prices, 4-digit precision.
using Price = Fixed<4>;

/// shares * price rounded half away from zero to cents. Exact whenever the
/// price has at most two decimals.
Money notional(std::int64_t shares, Price price);

/// Largest whole share count whose exact cost does not exceed `cash`.
std::int64_t affordable_shares(Money cash, Price price);

/// floor(value / price) for a signed amount, exact.
std::int64_t floor_shares(Money value, Price price);

/// Money converted to price precision (exact).
Price to_price(Money m);

}  // namespace livefund
