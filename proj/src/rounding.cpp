#include "msbc/rounding.hpp"

#include <fmt/format.h>

#include "msbc/errors.hpp"

namespace msbc {
namespace {

mpz_class pow10(long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

// Power of ten p with 10^(p-1) <= |x| < 10^p.
long decimal_exponent(const Rational& ax) {
  long p = 0;
  Rational v = ax;
  while (v >= 1) {
    v /= 10;
    ++p;
  }
  while (v < Rational(1, 10)) {
    v *= 10;
    --p;
  }
  return p;
}

Rational scale10(const Rational& x, long e) {
  Rational r = x;
  if (e > 0) r *= Rational(pow10(e));
  if (e < 0) r /= Rational(pow10(-e));
  r.canonicalize();
  return r;
}

// Integer nearest to a non-negative rational.
mpz_class round_nonneg(const Rational& v, bool half_even) {
  mpz_class q = v.get_num() / v.get_den();
  Rational frac = v - Rational(q);
  int c = cmp(frac, Rational(1, 2));
  if (c > 0 || (c == 0 && (!half_even || q % 2 != 0))) q += 1;
  return q;
}

Rational round_once(const Rational& x, int digits, bool half_even) {
  if (sgn(x) == 0) return x;
  Rational ax = abs(x);
  long shift = digits - decimal_exponent(ax);
  Rational r = scale10(Rational(round_nonneg(scale10(ax, shift), half_even)), -shift);
  return sgn(x) < 0 ? Rational(-r) : r;
}

}  // namespace

Rational round_significant(const Rational& x, int digits, Rounding mode) {
  if (digits < 1) throw PreconditionError("round_significant: digits must be positive");
  if (mode == Rounding::half_even) return round_once(x, digits, true);
  return round_once(round_once(x, digits + 1, false), digits, false);
}

Rational parse_decimal(const std::string& text) {
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  auto dot = s.find('.');
  std::string digits = s, frac;
  if (dot != std::string::npos) {
    digits = s.substr(0, dot);
    frac = s.substr(dot + 1);
  }
  if (digits.empty()) digits = "0";
  mpz_class num;
  if (num.set_str(digits + frac, 10) != 0) throw ValidationError("bad decimal '" + text + "'");
  Rational r(num, pow10(long(frac.size())));
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

std::string decimal_string(const Rational& x, int digits) {
  Rational r = round_significant(x, digits);
  long k = 0;
  while (r.get_den() != 1 && k < 64) {
    r *= 10;
    r.canonicalize();
    ++k;
  }
  mpz_class n = abs(r.get_num());
  std::string d = n.get_str();
  if (k > 0) {
    if (long(d.size()) <= k) d.insert(0, std::size_t(k - long(d.size()) + 1), '0');
    d.insert(d.size() - std::size_t(k), ".");
  }
  return (sgn(r) < 0 ? "-" : "") + d;
}

bool matches_significant(const Rational& x, const std::string& printed, int digits, Rounding mode) {
  return round_significant(x, digits, mode) == round_significant(parse_decimal(printed), digits, mode);
}

}  // namespace msbc
