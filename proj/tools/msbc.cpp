#include <iostream>

#include <CLI11.hpp>

#include "msbc/errors.hpp"
#include "msbc/experiment/commands.hpp"
#include "msbc/rounding.hpp"

using namespace msbc;

int main(int argc, char** argv) {
  CLI::App app{"Macroscale boundary conditions for the two-stream heat exchanger"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto* derive = app.add_subcommand("derive", "normal form, reverted boundary series and Robin conditions");
  int order = 3;
  std::string out;
  double xval_tol = 1e-12;
  std::vector<std::string> profile;
  derive->add_option("--order", order, "truncation order in the state variables")->check(CLI::Range(2, 8));
  derive->add_option("--out", out, "output directory")->required();
  derive->add_option("--xval-tolerance", xval_tol, "embedding cross-check tolerance (relative)");
  derive->add_option("--profile", profile, "amplitudes a0 b0 aL bL of the f-profile conditions")->expected(4);

  auto* simulate = app.add_subcommand("simulate", "run one solver on a scenario");
  std::string scenario, mode;
  simulate->add_option("--scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--mode", mode, "micro | macro-dirichlet | macro-robin | macro-robin-linear")
      ->required()
      ->check(CLI::IsMember({"micro", "macro-dirichlet", "macro-robin", "macro-robin-linear"}));
  simulate->add_option("--out", out, "output directory")->required();

  auto* compare = app.add_subcommand("compare", "micro reference against the macroscale boundary modes");
  std::vector<double> window;
  compare->add_option("--scenario", scenario, "scenario file")->required()->check(CLI::ExistingFile);
  compare->add_option("--out", out, "output directory")->required();
  compare->add_option("--window", window, "interior window LO HI")->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_validation;
  }

  try {
    if (derive->parsed()) {
      DerivationOptions o;
      o.order = order;
      o.xval_tolerance = xval_tol;
      if (!profile.empty())
        for (int i = 0; i < 4; ++i) o.profile[i] = parse_decimal(profile[i]);
      return cmd_derive(o, out, std::cout);
    }
    if (simulate->parsed()) return cmd_simulate(scenario, parse_mode(mode), out, std::cout);
    std::optional<Window> w;
    if (!window.empty()) w = Window{window[0], window[1]};
    return cmd_compare(scenario, out, w, std::cout);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_validation;
  }
}
