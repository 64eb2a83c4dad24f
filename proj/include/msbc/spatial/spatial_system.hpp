#pragma once

#include <iosfwd>
#include <string>

#include "msbc/linalg/dense_matrix.hpp"
#include "msbc/series/truncated_series.hpp"
#include "msbc/spatial/eigen_structure.hpp"

namespace msbc {

enum class Embedding { A, B };

// du/dx = linear * u + nonlinear(u, eps) for u = (a, b, a', b').
struct SpatialSystem {
  std::string name;
  DenseMatrix<Rational> linear;
  SeriesVector<Rational> nonlinear;  // variables a, b, ap, bp, eps

  // Linear matrix plus the eps-linear part of the nonlinearity at eps = 1.
  DenseMatrix<Rational> effective_linear() const;
  // The system obtained by setting eps = 1 and folding eps-linear terms into the matrix.
  SpatialSystem at_unit_parameter() const;
  bool operator==(const SpatialSystem& o) const { return linear == o.linear && nonlinear == o.nonlinear; }
};

VariablesPtr field_variables();  // a, b, ap, bp | eps
Truncation field_truncation();   // quadratic in the state, linear in eps

SpatialSystem build_original();
SpatialSystem build_embedding(Embedding variant);

struct CoordinateMap {
  DenseMatrix<Rational> matrix;   // (a, b, a', b') -> (s1, s2, s3, s4)
  DenseMatrix<Rational> inverse;
};

CoordinateMap coordinate_map();

void write_system(std::ostream& os, const SpatialSystem& sys);
SpatialSystem read_system(std::istream& is);

}  // namespace msbc
