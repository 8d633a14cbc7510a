#include "pcf/io/format.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace pcf::io {
namespace {

std::string special(double v) {
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return special(value);
  std::array<char, 512> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, std::clamp(decimals, 0, 340));
  if (ec != std::errc{}) return special(std::nan(""));
  std::string s(buf.data(), end);
  if (s == "-0" || (s.rfind("-0.", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos)) {
    s.erase(0, 1);
  }
  return s;
}

std::string format_decimal(double value, int significant) {
  if (!std::isfinite(value)) return special(value);
  if (value == 0.0) return "0";
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(value))));
  std::string s = format_fixed(value, std::max(0, significant - 1 - exponent));
  // strip trailing zeros after the point
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

}  // namespace pcf::io
