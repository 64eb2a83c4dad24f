#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>

namespace msbc {

using Rational = mpq_class;

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational from_rational(const Rational& r) { return r; }
  static double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
};

template <>
struct CoeffTraits<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static bool is_zero(double x) { return x == 0.0; }
  static double to_double(double x) { return x; }
  static double from_rational(const Rational& r) { return r.get_d(); }
  static double magnitude(double x) { return std::fabs(x); }
};

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) {
  return r.get_den() == 1 ? r.get_num().get_str() : r.get_str();
}

}  // namespace msbc
