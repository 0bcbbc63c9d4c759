#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace swarmgear::csv {

/// Shortest round-trip decimal representation of a double (std::to_chars).
/// The same value always yields the same bytes, which keeps CSV output
/// reproducible across runs.
std::string format_double(double value);

/// Splits one CSV line on commas. No quoting support; the emitted schemas
/// never contain commas inside fields.
std::vector<std::string_view> split_fields(std::string_view line);

/// Parses a double field; throws std::invalid_argument on malformed input.
double parse_double(std::string_view field);

/// Parses a non-negative integer field; throws std::invalid_argument.
long long parse_int(std::string_view field);

}  // namespace swarmgear::csv
