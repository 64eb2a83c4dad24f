#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>

#include "msbc/series/variables.hpp"

namespace msbc {

class Monomial {
 public:
  using Exponent = std::uint16_t;

  Monomial() = default;
  explicit Monomial(std::span<const int> exponents);

  static Monomial unit(std::size_t var, int power = 1);

  Exponent operator[](std::size_t i) const { return e_[i]; }
  void set(std::size_t i, int power);

  int degree() const;
  int degree(const VariableSet& vars, bool parameters) const;

  Monomial operator*(const Monomial& other) const;
  // Exponent of var lowered by one; caller checks the exponent is positive.
  Monomial lowered(std::size_t var) const;

  auto operator<=>(const Monomial&) const = default;

 private:
  std::array<Exponent, kMaxVariables> e_{};
};

}  // namespace msbc
