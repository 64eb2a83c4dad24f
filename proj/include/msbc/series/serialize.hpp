#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "msbc/rounding.hpp"
#include "msbc/series/truncated_series.hpp"

namespace msbc {

// Text form: optional '#' header lines, then one term per line as
// "<num>/<den> e_1 ... e_n" in lexicographic exponent order.
void write_series(std::ostream& os, const TruncatedSeries<Rational>& s);
TruncatedSeries<Rational> read_series(std::istream& is, VariablesPtr vars, Truncation trunc);

// Named blocks introduced by "# component <name>".
void write_series_vector(std::ostream& os, const SeriesVector<Rational>& v, const std::vector<std::string>& names);
SeriesVector<Rational> read_series_vector(std::istream& is, VariablesPtr vars, Truncation trunc,
                                          std::vector<std::string>* names = nullptr);

// Human-readable polynomial, e.g. "3/2*s1^2 - s2*eps".
std::string format_series(const TruncatedSeries<Rational>& s);
std::string format_series(const TruncatedSeries<double>& s, int digits = 6);
// Decimal coefficients rounded to the given significant digits, lowest degree
// first and s1-heavy terms first within a degree: "-0.67*s3 - 0.75*s1*s3".
std::string format_rounded(const TruncatedSeries<Rational>& s, int digits = 2,
                           Rounding mode = Rounding::half_even);

}  // namespace msbc
