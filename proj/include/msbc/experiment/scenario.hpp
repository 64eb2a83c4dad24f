#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "msbc/boundary/boundary.hpp"
#include "msbc/pde/grid.hpp"
#include "msbc/pde/kernels.hpp"
#include "msbc/pde/macro_solver.hpp"
#include "msbc/pde/metrics.hpp"
#include "msbc/pde/rosenbrock.hpp"

namespace msbc {

enum class Profile { tanh2, constant };

struct Scenario {
  std::string name = "scenario";
  Grid1D grid;
  double t_end = 21.0;
  std::vector<double> snapshots;
  Profile profile = Profile::tanh2;
  double a0 = 0.0, b0 = 0.0, aL = 0.0, bL = 0.0;  // amplitudes
  IntegratorOptions integrator;
  RobinFallback fallback = RobinFallback::none;
  Execution execution = Execution::parallel;
  int order = 3;
  std::optional<std::filesystem::path> derivation_source;  // directory written by derive
  Window window;
  bool linearised = false;

  BoundaryData boundary_data() const;
};

// Bracketed sections of "key = value" lines; '#' starts a comment. Unknown
// sections or keys are rejected. Relative paths resolve against base_dir.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& file);

// Canonical text form; parse_scenario(to_text(s)) == s field by field.
std::string to_text(const Scenario& s);

}  // namespace msbc
