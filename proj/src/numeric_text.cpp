#include "sfp/numeric_text.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "sfp/errors.hpp"

namespace sfp {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_decimal(std::string_view s, std::string_view whole) {
    s = trim(s);
    double value = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw InvalidInput("not a number: '" + std::string(whole) + "'");
    }
    return value;
}

} // namespace

double parse_real(std::string_view text) {
    const auto slash = text.find('/');
    double value = 0.0;
    if (slash == std::string_view::npos) {
        value = parse_decimal(text, text);
    } else {
        const double num = parse_decimal(text.substr(0, slash), text);
        const double den = parse_decimal(text.substr(slash + 1), text);
        if (den == 0.0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
        value = num / den;
    }
    if (!std::isfinite(value)) throw InvalidInput("non-finite number: '" + std::string(text) + "'");
    return value;
}

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

} // namespace sfp
