#pragma once

#include <optional>
#include <string>

namespace eadam {

// Shortest decimal form that parses back to the identical double
// (std::to_chars round-trip guarantee). Locale-independent.
std::string format_double(double value);

// Fixed-precision form for SVG coordinates.
std::string format_fixed(double value, int precision);

// Compact %g-style form for axis labels.
std::string format_general(double value, int precision);

// Locale-independent parse of a full string; nullopt on any trailing junk.
std::optional<double> parse_double(const std::string& text);
std::optional<long long> parse_int(const std::string& text);

}  // namespace eadam
