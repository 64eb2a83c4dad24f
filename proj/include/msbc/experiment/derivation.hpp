#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "msbc/boundary/boundary.hpp"
#include "msbc/normal_form/normal_form.hpp"
#include "msbc/spatial/eigen_structure.hpp"

namespace msbc {

struct DerivationOptions {
  int order = 3;
  double xval_tolerance = 1e-12;
  bool cross_validate = true;
  // Boundary amplitudes for the specialised conditions: a0 = k0 f, b0 = k1 f
  // on the left, aL = k2 f, bL = k3 f on the right.
  std::array<Rational, 4> profile{Rational(1, 5), Rational(0), Rational(0), Rational(1, 5)};
};

struct Derivation {
  DerivationOptions options;
  NormalForm<Rational> graded;     // variant A, graded in eps
  SeriesVector<Rational> transform;  // eps = 1, over s1..s4
  SeriesVector<Rational> evolution;
  std::size_t conjugacy_terms = 0;  // residual terms of state degree <= order
  StructureReport structure;
  EigenStructure original_spectrum;
  BoundaryConstraint constraint;
  RevertedBoundary reverted;
  std::size_t roundtrip_terms = 0;
  RobinBC left, right;
  CrossValidation xval;
};

Derivation run_derivation(const DerivationOptions& opts);

// "C - (P)*Cx - (Q)*Cx^2 = R" with decimal coefficients.
std::string robin_equation(const RobinBC& bc, int digits = 2);
std::string robin_equation(const ProfileRobin& bc, int digits = 2);

// Writes report.txt, the exact series files, resonance.txt, robin.txt and
// crossval.txt. Content depends only on the derivation, never on timing.
void write_derivation(const Derivation& d, const std::filesystem::path& dir);

// Reads the left and right conditions back from robin.txt.
std::pair<RobinBC, RobinBC> load_robin(const std::filesystem::path& dir);

}  // namespace msbc
