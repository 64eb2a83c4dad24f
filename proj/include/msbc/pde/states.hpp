#pragma once

#include <vector>

#include "msbc/pde/grid.hpp"
#include "msbc/pde/rosenbrock.hpp"

namespace msbc {

struct MicroState {
  double t = 0.0;
  Grid1D grid;
  std::vector<double> a, b;
};

struct MacroState {
  double t = 0.0;
  Grid1D grid;
  std::vector<double> C;
};

template <class State>
struct Trajectory {
  std::vector<State> snapshots;
  IntegrationStats stats;
};

// Sorted, de-duplicated output times; t_end alone when none are requested.
std::vector<double> output_times(std::vector<double> snapshots, double t_end);

}  // namespace msbc
