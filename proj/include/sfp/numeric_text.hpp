#pragma once

#include <string>
#include <string_view>

namespace sfp {

/// Parses a decimal literal or an exact fraction "p/q". Throws InvalidInput.
double parse_real(std::string_view text);

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double value);

} // namespace sfp
