#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace pcf::io {

/// SPICE-style number: a decimal or exponent literal followed by at most
/// one scale suffix f p n u m k meg g (case-insensitive; m is milli).
/// Anything else after the number is rejected. nullopt on failure.
std::optional<double> parse_si(std::string_view token);

/// Engineering form with a suffix, e.g. 7.5e-13 -> "750f", 10950 -> "10.95k".
/// `significant` digits in the mantissa; trailing zeros removed.
std::string format_si(double value, int significant = 15);

}  // namespace pcf::io
