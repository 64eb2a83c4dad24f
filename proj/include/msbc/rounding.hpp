#pragma once

#include <string>

#include "msbc/series/coefficient.hpp"

namespace msbc {

enum class Rounding {
  half_even,       // round the exact value once
  half_away_twice  // round to digits+1 first, then to digits, ties away from zero
};

// Exact decimal rounding of a rational to the given significant digits.
Rational round_significant(const Rational& x, int digits, Rounding mode = Rounding::half_even);

Rational parse_decimal(const std::string& text);  // "-0.035" -> -7/200
// Exact decimal of x rounded half-even to the given significant digits, e.g. -0.035.
std::string decimal_string(const Rational& x, int digits);

// True when x rounds to the printed decimal under the given mode.
bool matches_significant(const Rational& x, const std::string& printed, int digits = 2,
                         Rounding mode = Rounding::half_even);

}  // namespace msbc
