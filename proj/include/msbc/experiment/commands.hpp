#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "msbc/experiment/derivation.hpp"
#include "msbc/experiment/scenario.hpp"
#include "msbc/pde/metrics.hpp"
#include "msbc/pde/micro_solver.hpp"

namespace msbc {

inline constexpr const char* kToolVersion = "msbc 1.0.0";

// Stable exit codes.
enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_numerical = 2 };

enum class Mode { micro, macro_dirichlet, macro_robin, macro_robin_linear };
Mode parse_mode(const std::string& s);
std::string mode_name(Mode m);

int cmd_derive(const DerivationOptions& opts, const std::filesystem::path& out, std::ostream& log);
int cmd_simulate(const std::filesystem::path& scenario, Mode mode, const std::filesystem::path& out,
                 std::ostream& log);
int cmd_compare(const std::filesystem::path& scenario, const std::filesystem::path& out, std::optional<Window> window,
                std::ostream& log);

// Robin conditions for a scenario: read from the derivation source directory
// when one is configured, otherwise derived in process at the scenario order.
struct DerivedConditions {
  RobinBC left, right;
  std::string provenance;
  std::string xval_verdict;
};
DerivedConditions derived_conditions(const Scenario& s);

// One macro boundary pair per mode; micro has none.
std::pair<MacroBoundary, MacroBoundary> macro_boundaries(const Scenario& s, Mode mode,
                                                         const DerivedConditions* derived);

// Solver configurations built from a scenario, as used by simulate and compare.
MicroConfig micro_config(const Scenario& s);
MacroConfig macro_config(const Scenario& s, Mode mode, const DerivedConditions* derived);

// Ratio threshold for compare: MSBC_SEED_TOLERANCE when set, else 0.5.
double ratio_threshold();

std::string snapshot_file_name(const std::string& scenario, Mode mode, double t);

}  // namespace msbc
