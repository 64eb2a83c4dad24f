#pragma once

#include <vector>

#include "msbc/errors.hpp"

namespace msbc {

// Uniform nodes x_i = i dx, i = 0..n, on [0, L].
struct Grid1D {
  double L = 30.0;
  int n = 600;

  Grid1D() = default;
  Grid1D(double length, int intervals) : L(length), n(intervals) { validate(); }

  void validate() const {
    if (n < 8) throw ValidationError("grid: at least 8 intervals required");
    if (!(L > 0.0)) throw ValidationError("grid: length must be positive");
  }
  double dx() const { return L / n; }
  double x(int i) const { return i * dx(); }
  std::size_t nodes() const { return std::size_t(n) + 1; }
  std::vector<double> coordinates() const {
    std::vector<double> xs(nodes());
    for (int i = 0; i <= n; ++i) xs[i] = x(i);
    return xs;
  }
};

}  // namespace msbc
