#include "rumor/csv.hpp"

#include <istream>
#include <iterator>
#include <ostream>

#include "rumor/common.hpp"

namespace rumor::csv {

std::vector<Record> read(std::istream& in) {
  const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<Record> records;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = data.size();

  while (i < n) {
    // Skip blank lines between records.
    if (data[i] == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (data[i] == '\r' && i + 1 < n && data[i + 1] == '\n') {
      ++line;
      i += 2;
      continue;
    }

    Record rec;
    rec.line = line;
    std::string field;
    bool end_of_record = false;
    while (!end_of_record) {
      field.clear();
      if (i < n && data[i] == '"') {
        ++i;
        bool closed = false;
        while (i < n) {
          const char c = data[i];
          if (c == '"') {
            if (i + 1 < n && data[i + 1] == '"') {
              field.push_back('"');
              i += 2;
            } else {
              ++i;
              closed = true;
              break;
            }
          } else {
            if (c == '\n') ++line;
            field.push_back(c);
            ++i;
          }
        }
        if (!closed) throw Error("unterminated quoted field in record starting at line " + std::to_string(rec.line));
        if (i < n && data[i] != ',' && data[i] != '\n' && data[i] != '\r') {
          throw Error("unexpected character after closing quote at line " + std::to_string(line));
        }
      } else {
        while (i < n && data[i] != ',' && data[i] != '\n' && data[i] != '\r') {
          if (data[i] == '"') throw Error("stray quote in unquoted field at line " + std::to_string(line));
          field.push_back(data[i]);
          ++i;
        }
      }
      rec.fields.push_back(field);
      if (i >= n) {
        end_of_record = true;
      } else if (data[i] == ',') {
        ++i;
      } else {
        if (data[i] == '\r') ++i;
        if (i < n && data[i] == '\n') ++i;
        ++line;
        end_of_record = true;
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace rumor::csv
