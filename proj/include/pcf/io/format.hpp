#pragma once

#include <string>

namespace pcf::io {

/// Plain decimal notation (never an exponent) with `significant` digits.
/// inf/nan print as "inf", "-inf", "nan".
std::string format_decimal(double value, int significant = 12);

/// Fixed number of digits after the point.
std::string format_fixed(double value, int decimals);

}  // namespace pcf::io
