#include "msbc/series/monomial.hpp"

#include <limits>

#include "msbc/errors.hpp"

namespace msbc {

Monomial::Monomial(std::span<const int> exponents) {
  if (exponents.size() > kMaxVariables) throw StructuralError("monomial: too many variables");
  for (std::size_t i = 0; i < exponents.size(); ++i) set(i, exponents[i]);
}

Monomial Monomial::unit(std::size_t var, int power) {
  Monomial m;
  m.set(var, power);
  return m;
}

void Monomial::set(std::size_t i, int power) {
  if (i >= kMaxVariables) throw StructuralError("monomial: variable index out of range");
  if (power < 0 || power > std::numeric_limits<Exponent>::max())
    throw StructuralError("monomial: exponent out of range");
  e_[i] = static_cast<Exponent>(power);
}

int Monomial::degree() const {
  int d = 0;
  for (auto e : e_) d += e;
  return d;
}

int Monomial::degree(const VariableSet& vars, bool parameters) const {
  int d = 0;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars.is_parameter(i) == parameters) d += e_[i];
  return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  for (std::size_t i = 0; i < kMaxVariables; ++i) {
    int s = int(e_[i]) + int(other.e_[i]);
    if (s > std::numeric_limits<Exponent>::max()) throw StructuralError("monomial: exponent overflow");
    r.e_[i] = static_cast<Exponent>(s);
  }
  return r;
}

Monomial Monomial::lowered(std::size_t var) const {
  Monomial r = *this;
  --r.e_[var];
  return r;
}

}  // namespace msbc
