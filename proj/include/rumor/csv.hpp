#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rumor::csv {

struct Record {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

/// Reads RFC 4180 records (quoted fields, doubled quotes, embedded line
/// breaks, CRLF or LF). Blank lines are skipped. Throws Error on an
/// unterminated quote or stray quote inside an unquoted field.
std::vector<Record> read(std::istream& in);

/// Quotes the field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace rumor::csv
