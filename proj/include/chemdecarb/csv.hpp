#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chemdecarb::csv {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Splits one unquoted CSV line. Fields never contain commas or quotes in
// any format this library reads or writes.
std::vector<std::string_view> split_line(std::string_view line);

// Reads the next non-comment, non-blank line. Returns false at EOF.
// `line_no` is advanced past every consumed physical line.
bool next_record(std::istream& in, std::string& line, std::size_t& line_no);

// Joins fields with commas and a trailing newline.
std::string join(const std::vector<std::string>& fields);

}  // namespace chemdecarb::csv
