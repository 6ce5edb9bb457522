#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace qclp {

/// Exact rational arithmetic. All weights, factors and model values are
/// kept as arbitrary-precision rationals so comparisons are bit-exact.
using Rational = mpq_class;

Rational make_rational(long num, long den);

/// Renders as "p/q", or just "p" when the denominator is 1.
std::string to_fraction_string(const Rational& r);

/// Fixed-point decimal rendering, truncated toward zero.
std::string to_decimal_string(const Rational& r, int places = 6);

/// Parses a decimal literal ("0.7", ".7", "1", "1.0") with at most
/// `max_fraction_digits` digits after the point.
std::optional<Rational> parse_decimal(std::string_view text, int max_fraction_digits = 9);

/// Parses either a decimal literal or a "p/q" fraction.
std::optional<Rational> parse_rational(std::string_view text);

}  // namespace qclp
