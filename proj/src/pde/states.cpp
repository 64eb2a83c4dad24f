#include "msbc/pde/states.hpp"

#include <algorithm>

#include "msbc/errors.hpp"

namespace msbc {

std::vector<double> output_times(std::vector<double> snapshots, double t_end) {
  if (!(t_end > 0.0)) throw ValidationError("solve: t_end must be positive");
  if (snapshots.empty()) snapshots.push_back(t_end);
  std::sort(snapshots.begin(), snapshots.end());
  snapshots.erase(std::unique(snapshots.begin(), snapshots.end()), snapshots.end());
  if (snapshots.front() < 0.0 || snapshots.back() > t_end)
    throw ValidationError("solve: snapshot times must lie in [0, t_end]");
  return snapshots;
}

}  // namespace msbc
