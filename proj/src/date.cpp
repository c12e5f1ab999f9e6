#include "gigmine/date.hpp"

#include <charconv>
#include <cstdio>

namespace gigmine {

namespace {

bool parse_uint(std::string_view s, unsigned& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace

std::optional<Date> parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  unsigned y = 0, m = 0, d = 0;
  if (!parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), m) ||
      !parse_uint(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  Date date = make_date(static_cast<int>(y), m, d);
  if (!date.ok()) return std::nullopt;
  return date;
}

std::optional<Date> parse_partial_date(std::string_view text) {
  unsigned y = 0, m = 1, d = 1;
  if (text.size() < 4 || !parse_uint(text.substr(0, 4), y) || y == 0) return std::nullopt;
  if (text.size() > 4) {
    if (text.size() < 7 || text[4] != '-' || !parse_uint(text.substr(5, 2), m)) return std::nullopt;
    if (text.size() > 7) {
      if (text.size() != 10 || text[7] != '-' || !parse_uint(text.substr(8, 2), d)) return std::nullopt;
    }
  }
  if (m == 0) m = 1;
  if (d == 0) d = 1;
  Date date = make_date(static_cast<int>(y), m, d);
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

}  // namespace gigmine
