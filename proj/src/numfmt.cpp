#include "biovalent/numfmt.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

namespace biovalent {

namespace {

std::string to_chars_string(double value, std::chars_format fmt, std::optional<int> precision) {
  std::array<char, 64> buf{};
  auto res = precision ? std::to_chars(buf.data(), buf.data() + buf.size(), value, fmt, *precision)
                       : std::to_chars(buf.data(), buf.data() + buf.size(), value, fmt);
  return std::string(buf.data(), res.ptr);
}

// to_chars may print "-0.00"; reports never want a signed zero.
std::string drop_negative_zero(std::string s) {
  if (s.size() > 1 && s[0] == '-' && s.find_first_not_of("0.", 1) == std::string::npos) s.erase(0, 1);
  return s;
}

}  // namespace

std::string format_shortest(double value) {
  if (value == 0.0) return "0";
  return to_chars_string(value, std::chars_format::general, std::nullopt);
}

std::string format_fixed(double value, int decimals) {
  return drop_negative_zero(to_chars_string(value, std::chars_format::fixed, decimals));
}

std::string format_scientific(double value, int decimals) {
  return to_chars_string(value, std::chars_format::scientific, decimals);
}

std::string format_grouped(double value, char separator) {
  const double rounded = std::round(value);
  const bool negative = rounded < 0;
  std::string digits = format_fixed(std::fabs(rounded), 0);
  std::string out;
  const std::size_t n = digits.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(digits[i]);
    const std::size_t remaining = n - i - 1;
    if (remaining > 0 && remaining % 3 == 0) out.push_back(separator);
  }
  return negative ? "-" + out : out;
}

std::string_view trim(std::string_view text) noexcept {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<long> parse_long(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace biovalent
