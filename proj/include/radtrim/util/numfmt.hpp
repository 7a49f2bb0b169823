#pragma once

#include <string>

namespace radtrim::util {

/// Formats a double with the given number of significant digits ("%.*g").
/// NaN and infinities format as "null" so they are never emitted as bare
/// JSON tokens.
std::string format_double(double value, int significant_digits);

/// Full-precision formatting (17 significant digits) that round-trips
/// exactly through strtod.
std::string format_double_exact(double value);

}  // namespace radtrim::util
