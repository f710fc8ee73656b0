#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace biovalent {

/// Shortest text that parses back to exactly `value`.
std::string format_shortest(double value);

/// Fixed notation with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Scientific notation with `decimals` mantissa digits, e.g. "1.23e-06".
std::string format_scientific(double value, int decimals);

/// Rounds to the nearest integer and groups thousands, e.g. -8486 -> "-8 486".
std::string format_grouped(double value, char separator = ' ');

/// Strict whole-field parse; surrounding blanks are tolerated, anything else is not.
std::optional<double> parse_double(std::string_view text);
std::optional<long> parse_long(std::string_view text);

std::string_view trim(std::string_view text) noexcept;

}  // namespace biovalent
