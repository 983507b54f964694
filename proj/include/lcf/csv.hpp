#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lcf {

/// Splits one CSV line into fields. Double-quoted fields may contain commas
/// and doubled quotes (""). Throws std::runtime_error on unbalanced quotes
/// or garbage after a closing quote.
std::vector<std::string> split_csv_row(std::string_view line);

/// Quotes a field for CSV output when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

/// Fixed-point formatting, e.g. format_fixed(0.25, 6) == "0.250000".
std::string format_fixed(double value, int digits);

/// Shortest form that survives a round trip through text, for grid values
/// and config echoes ("1.5", "0.25").
std::string format_compact(double value);

std::string_view trim(std::string_view s);

}  // namespace lcf
