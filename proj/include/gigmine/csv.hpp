#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gigmine::csv {

struct Record {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
  bool well_formed = true;  // false on an unterminated quote
};

/// RFC 4180 reader over an in-memory buffer: quoted fields, doubled quotes,
/// embedded separators and line breaks, LF or CRLF line endings. A UTF-8
/// byte-order mark at the start is skipped.
class Reader {
 public:
  explicit Reader(std::string_view text);
  bool next(Record& out);

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::vector<Record> read_all(std::string_view text);

/// Quotes a field when it contains a separator, quote, or line break.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace gigmine::csv
