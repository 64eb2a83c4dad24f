#pragma once

#include <optional>
#include <vector>

#include "msbc/linalg/dense_matrix.hpp"

namespace msbc {

struct Eigenpair {
  double value = 0.0;
  std::optional<Rational> exact_value;  // set when the eigenvalue is rational
  std::vector<double> vector;
  std::optional<std::vector<Rational>> exact_vector;
};

struct EigenStructure {
  std::vector<Eigenpair> pairs;  // one per independent eigenvector found
  std::vector<double> spectrum;  // all eigenvalues with algebraic multiplicity
  std::vector<Rational> characteristic;  // det(x I - A), lowest degree first
  bool exact = false;                    // every eigenvalue rational
  bool diagonalisable = false;
  bool real = true;

  double max_residual(const DenseMatrix<Rational>& a) const;
};

// Coefficients of det(x I - A) by Faddeev-LeVerrier, lowest degree first.
std::vector<Rational> characteristic_polynomial(const DenseMatrix<Rational>& a);

// Rational roots with multiplicity; the deflated remainder is returned too.
std::vector<Rational> rational_roots(std::vector<Rational> poly, std::vector<Rational>* remainder = nullptr);

Rational evaluate_polynomial(const std::vector<Rational>& poly, const Rational& x);

// Exact eigenvectors for rational eigenvalues, double precision for the rest.
EigenStructure eigen_structure(const DenseMatrix<Rational>& a);

}  // namespace msbc
