#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace gigmine {

using Date = std::chrono::year_month_day;

/// Strict `YYYY-MM-DD`. Returns nullopt on anything else, including
/// impossible calendar dates.
std::optional<Date> parse_iso_date(std::string_view text);

/// Release dates as found in discography dumps: `YYYY`, `YYYY-MM` or
/// `YYYY-MM-DD`. Missing components (absent or `00`) become 1.
std::optional<Date> parse_partial_date(std::string_view text);

std::string format_date(const Date& d);

inline int year_of(const Date& d) { return static_cast<int>(d.year()); }

inline Date make_date(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

inline std::chrono::sys_days to_days(const Date& d) { return std::chrono::sys_days{d}; }
inline Date from_days(std::chrono::sys_days d) { return Date{d}; }

}  // namespace gigmine
