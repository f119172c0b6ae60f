#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mtg::csv {

// RFC 4180 quoting: fields with comma, quote or newline are quoted.
std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Parses one record; handles quoted fields but not embedded newlines.
std::vector<std::string> parse_line(std::string_view line);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws SchemaError if absent.
  std::size_t column(std::string_view name) const;
};

Table read(std::istream& in);

// Shortest decimal that round-trips the double.
std::string number(double value);
// Fixed-point with the given number of decimals.
std::string fixed(double value, int decimals);

}  // namespace mtg::csv
