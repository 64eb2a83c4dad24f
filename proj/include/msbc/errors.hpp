#pragma once

#include <stdexcept>
#include <string>

namespace msbc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched variable sets or truncations between operands.
struct StructuralError : Error {
  using Error::Error;
};

// Substitution or reversion whose input violates a documented precondition.
struct PreconditionError : Error {
  using Error::Error;
};

struct ReversionError : Error {
  using Error::Error;
};

// The normal-form construction refuses non-diagonalisable linear parts.
struct ConstructionRefused : Error {
  using Error::Error;
};

// Bad scenario file, bad CLI input, failed verification.
struct ValidationError : Error {
  using Error::Error;
};

// Integrator or boundary-closure breakdown.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace msbc
