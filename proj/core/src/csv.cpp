#include "swarmgear/csv.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace swarmgear::csv {

std::string format_double(double value) {
  value += 0.0;  // map negative zero to "0" instead of "-0"
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view field) {
  double value = 0.0;
  const auto result = std::from_chars(field.data(), field.data() + field.size(), value);
  if (result.ec != std::errc() || result.ptr != field.data() + field.size()) {
    throw std::invalid_argument("malformed numeric field: '" + std::string(field) + "'");
  }
  return value;
}

long long parse_int(std::string_view field) {
  long long value = 0;
  const auto result = std::from_chars(field.data(), field.data() + field.size(), value);
  if (result.ec != std::errc() || result.ptr != field.data() + field.size()) {
    throw std::invalid_argument("malformed integer field: '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace swarmgear::csv
