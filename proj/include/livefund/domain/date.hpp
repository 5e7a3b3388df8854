#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace livefund {

/// Calendar date (no time zone). Serialized as ISO-8601 "YYYY-MM-DD".
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
  Date(int year, unsigned month, unsigned day);

  /// Accepts "YYYY-MM-DD" and, for provider payloads, a leading date inside
  /// a longer timestamp ("2025-04-10T13:30:00", "20250410T133000").
  static Date parse(std::string_view text);
  static std::optional<Date> try_parse(std::string_view text);
  static Date today_utc();

  std::string iso() const;
  constexpr std::chrono::sys_days days() const { return days_; }
  Date plus_days(int n) const { return Date(days_ + std::chrono::days(n)); }
  bool is_weekend() const;
  /// Day count from `other` to this date.
  int days_since(Date other) const { return static_cast<int>((days_ - other.days_).count()); }

  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace livefund
