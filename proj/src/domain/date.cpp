#include "livefund/domain/date.hpp"

#include <cstdio>

#include "livefund/domain/error.hpp"

namespace livefund {

namespace {
bool all_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return !s.empty();
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}
}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    raise(ErrorKind::InvalidArgument,
          "invalid calendar date " + std::to_string(year) + "-" + std::to_string(month) + "-" +
              std::to_string(day));
  }
  days_ = std::chrono::sys_days{ymd};
}

std::optional<Date> Date::try_parse(std::string_view text) {
  std::string_view y, m, d;
  if (text.size() >= 10 && text[4] == '-' && text[7] == '-') {
    y = text.substr(0, 4);
    m = text.substr(5, 2);
    d = text.substr(8, 2);
    if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
  } else if (text.size() >= 8 && all_digits(text.substr(0, 8))) {
    y = text.substr(0, 4);
    m = text.substr(4, 2);
    d = text.substr(6, 2);
    if (text.size() > 8 && text[8] != 'T') return std::nullopt;
  } else {
    return std::nullopt;
  }
  if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{to_int(y)},
                                        std::chrono::month{static_cast<unsigned>(to_int(m))},
                                        std::chrono::day{static_cast<unsigned>(to_int(d))}};
  if (!ymd.ok()) return std::nullopt;
  return Date(std::chrono::sys_days{ymd});
}

Date Date::parse(std::string_view text) {
  if (auto d = try_parse(text)) return *d;
  raise(ErrorKind::InvalidArgument, "malformed date '" + std::string(text) + "'");
}

Date Date::today_utc() {
  return Date(std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now()));
}

std::string Date::iso() const {
  const std::chrono::year_month_day ymd{days_};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

bool Date::is_weekend() const {
  const std::chrono::weekday wd{days_};
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

}  // namespace livefund
