#include "pcf/io/si.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "pcf/io/format.hpp"
#include "pcf/text.hpp"

namespace pcf::io {
namespace {

struct Suffix {
  std::string_view text;
  int exponent;
};

// Positive powers of ten up to 1e22 are exact, so dividing keeps the
// result correctly rounded where multiplying by 1e-15 would not.
double scale10(double v, int exponent) {
  const double p = std::pow(10.0, std::abs(exponent));
  return exponent < 0 ? v / p : v * p;
}

// longest first so "meg" wins over "m"
constexpr std::array<Suffix, 8> kSuffixes{{
    {"meg", 6},
    {"f", -15},
    {"p", -12},
    {"n", -9},
    {"u", -6},
    {"m", -3},
    {"k", 3},
    {"g", 9},
}};

}  // namespace

std::optional<double> parse_si(std::string_view token) {
  if (token.empty()) return std::nullopt;
  // from_chars rejects a leading '+', SPICE accepts it
  std::string_view body = token;
  if (body.front() == '+') body.remove_prefix(1);
  if (body.empty() || body.front() == '+' || (token.front() == '+' && body.front() == '-')) {
    return std::nullopt;
  }
  double value = 0.0;
  const char* first = body.data();
  const char* last = body.data() + body.size();
  auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (ec != std::errc{} || ptr == first) return std::nullopt;
  // from_chars also accepts "inf"/"nan"
  if (!std::isfinite(value)) return std::nullopt;
  std::string_view rest(ptr, static_cast<std::size_t>(last - ptr));
  if (rest.empty()) return value;
  const Suffix* suffix = nullptr;
  for (const auto& s : kSuffixes) {
    if (text::iequals(rest, s.text)) suffix = &s;
  }
  if (!suffix) return std::nullopt;
  // Fold the suffix into the decimal exponent and convert once, so "4.56m"
  // yields exactly the double nearest to 4.56e-3.
  std::string_view number(first, static_cast<std::size_t>(ptr - first));
  long exponent = suffix->exponent;
  const auto e = number.find_first_of("eE");
  if (e != std::string_view::npos) {
    std::string_view digits = number.substr(e + 1);
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    long given = 0;
    auto [eptr, eec] = std::from_chars(digits.data(), digits.data() + digits.size(), given);
    if (eec != std::errc{} || eptr != digits.data() + digits.size()) return std::nullopt;
    exponent += given;
    number = number.substr(0, e);
  }
  const std::string spliced = std::string(number) + "e" + std::to_string(exponent);
  auto [sptr, sec] = std::from_chars(spliced.data(), spliced.data() + spliced.size(), value,
                                     std::chars_format::general);
  if (sec != std::errc{} || sptr != spliced.data() + spliced.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string format_si(double value, int significant) {
  if (!std::isfinite(value)) return format_decimal(value);
  if (value == 0.0) return "0";
  const int e = static_cast<int>(std::floor(std::log10(std::abs(value))));
  const int e3 = static_cast<int>(std::floor(e / 3.0)) * 3;
  if (e3 < -15 || e3 > 9) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::scientific, significant - 1);
    (void)ec;
    return std::string(buf.data(), end);
  }
  std::string_view suffix;
  for (const auto& s : kSuffixes) {
    if (s.exponent == e3) suffix = s.text;
  }
  const double mantissa = scale10(value, -e3);
  return format_decimal(mantissa, significant) + std::string(suffix);
}

}  // namespace pcf::io
