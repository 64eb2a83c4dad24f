#pragma once

#include <functional>
#include <vector>

#include "msbc/boundary/boundary.hpp"
#include "msbc/pde/kernels.hpp"
#include "msbc/pde/states.hpp"

namespace msbc {

struct MicroConfig {
  Grid1D grid;
  double t_end = 21.0;
  BoundaryData data;  // Dirichlet values a(0,t), b(0,t), a(L,t), b(L,t)
  std::vector<double> snapshots;
  IntegratorOptions integrator;
  MicroCoefficients coefficients;
  Execution execution = Execution::parallel;
  std::function<double(double)> initial_a, initial_b;  // zero when empty
};

Trajectory<MicroState> solve_microscale(const MicroConfig& cfg);

}  // namespace msbc
