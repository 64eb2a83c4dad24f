#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "msbc/experiment/commands.hpp"
#include "msbc/experiment/derivation.hpp"
#include "msbc/experiment/scenario.hpp"

using namespace msbc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("msbc_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MSBC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kZeroScenario = R"(# all data zero
[scenario]
name = zero
length = 30
intervals = 60
t_end = 2
snapshots = 1 2

[boundary]
profile = constant
a0 = 0
b0 = 0
aL = 0
bL = 0
)";

}  // namespace

TEST_CASE("scenario parsing and canonical text") {
  auto s = parse_scenario(R"([scenario]
name = demo   # trailing comment
length = 20
intervals = 80
t_end = 4
snapshots = 4 1 2

[boundary]
profile = constant
a0 = 0.1
bL = -0.05

[solver]
rtol = 1e-7
atol = 1e-9
robin_fallback = vertex
execution = serial

[derivation]
order = 4

[compare]
window = 2 18
linearised = false
)");
  CHECK(s.name == "demo");
  CHECK(s.grid.L == 20.0);
  CHECK(s.grid.n == 80);
  CHECK(s.t_end == 4.0);
  CHECK(s.profile == Profile::constant);
  CHECK(s.a0 == 0.1);
  CHECK(s.b0 == 0.0);
  CHECK(s.bL == -0.05);
  CHECK(s.integrator.rtol == 1e-7);
  CHECK(s.integrator.atol == 1e-9);
  CHECK(s.fallback == RobinFallback::vertex);
  CHECK(s.execution == Execution::serial);
  CHECK(s.order == 4);
  CHECK(s.window.lo == 2.0);
  CHECK(s.window.hi == 18.0);
  CHECK_FALSE(s.linearised);

  auto back = parse_scenario(to_text(s));
  CHECK(to_text(back) == to_text(s));
  CHECK(back.snapshots == s.snapshots);
  CHECK(back.bL == s.bL);

  auto data = s.boundary_data();
  CHECK(data.a0(3.0) == 0.1);
  CHECK(data.bL(0.0) == -0.05);
}

TEST_CASE("the shipped scenario uses the ramped profile") {
  auto s = load_scenario(fs::path(MSBC_SCENARIO_DIR) / "paper.scn");
  CHECK(s.grid.n == 600);
  CHECK(s.grid.L == 30.0);
  CHECK(s.t_end == 21.0);
  auto d = s.boundary_data();
  CHECK(d.a0(0.0) == 0.0);
  CHECK(d.a0(2.0) == doctest::Approx(0.2 * std::tanh(2.0) * std::tanh(2.0)));
  CHECK(d.b0(5.0) == 0.0);
  CHECK(d.bL(21.0) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("scenario errors") {
  CHECK_THROWS_AS(parse_scenario("[scenario]\nnmae = x\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("[plot]\nx = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nt_end = 2\nsnapshots = 3\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nintervals = 4\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nlength = abc\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("[solver]\nrtol = -1\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("[boundary]\nprofile = sawtooth\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("name = x\n"), ValidationError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/file.scn"), ValidationError);
}

TEST_CASE("modes and file names") {
  for (auto m : {Mode::micro, Mode::macro_dirichlet, Mode::macro_robin, Mode::macro_robin_linear})
    CHECK(parse_mode(mode_name(m)) == m);
  CHECK(mode_name(Mode::macro_robin_linear) == "macro-robin-linear");
  CHECK_THROWS(parse_mode("robin"));
  CHECK(snapshot_file_name("paper", Mode::micro, 21.0) == "paper_micro_t21.csv");
}

TEST_CASE("derivation output is deterministic") {
  DerivationOptions o;
  o.order = 2;
  auto d1 = scratch("derive1"), d2 = scratch("derive2");
  write_derivation(run_derivation(o), d1);
  write_derivation(run_derivation(o), d2);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(d1)) {
    CHECK(slurp(e.path()) == slurp(d2 / e.path().filename()));
    ++files;
  }
  CHECK(files >= 8);
  const auto report = slurp(d1 / "report.txt");
  CHECK(report.find("C - 0.5*Cx = 0.75*a0 + 0.25*b0") != std::string::npos);

  auto [left, right] = load_robin(d1);
  auto fresh = run_derivation(o);
  CHECK(left == fresh.left);
  CHECK(right == fresh.right);

  o.order = 1;
  CHECK_THROWS_AS(run_derivation(o), ValidationError);
}

TEST_CASE("robin equations render with decimal coefficients") {
  DerivationOptions o;
  o.cross_validate = false;
  auto d = run_derivation(o);
  CHECK(robin_equation(linearised(d.left)) == "C - 0.5*Cx = 0.75*a0 + 0.25*b0");
  CHECK(robin_equation(linearised(d.right)) == "C + 0.5*Cx = 0.25*aL + 0.75*bL");
  CHECK(robin_equation(in_profile(d.left, Rational(1, 5), Rational(0))) ==
        "C - (0.5 + 0.75*f)*Cx - 3*Cx^2 = 0.15*f + 0.007*f^2");
}

TEST_CASE("command line exit codes") {
  auto dir = scratch("cli");
  CHECK(run_cli("--version") == exit_ok);
  CHECK(run_cli("") == exit_validation);
  CHECK(run_cli("derive --order 1 --out " + dir.string()) == exit_validation);
  CHECK(run_cli("simulate --scenario /nonexistent.scn --mode micro --out " + dir.string()) == exit_validation);

  std::ofstream(dir / "bad.scn") << "[scenario]\nintervals = 3\n";
  CHECK(run_cli("simulate --scenario " + (dir / "bad.scn").string() + " --mode micro --out " + dir.string()) ==
        exit_validation);

  // A condition with no real slope: the closure fails and the run reports a numerical failure.
  std::ofstream(dir / "fold.scn") << "[scenario]\nname = fold\nintervals = 40\nt_end = 1\n"
                                     "[boundary]\nprofile = constant\na0 = 0.5\nb0 = 0.5\n";
  CHECK(run_cli("simulate --scenario " + (dir / "fold.scn").string() + " --mode macro-robin --out " +
                dir.string()) == exit_numerical);
}

TEST_CASE("zero data: all-zero CSV and n/a ratios") {
  auto dir = scratch("zero");
  std::ofstream(dir / "zero.scn") << kZeroScenario;
  const auto scn = (dir / "zero.scn").string();

  CHECK(run_cli("simulate --scenario " + scn + " --mode macro-dirichlet --out " + dir.string()) == exit_ok);
  std::ifstream csv(dir / snapshot_file_name("zero", Mode::macro_dirichlet, 2.0));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,x,field,value");
  int rows = 0;
  while (std::getline(csv, line)) {
    CHECK(line.substr(line.rfind(',') + 1) == "0");
    ++rows;
  }
  CHECK(rows == 61);
  CHECK(fs::exists(dir / "zero_macro-dirichlet_manifest.txt"));

  CHECK(run_cli("compare --scenario " + scn + " --out " + dir.string()) == exit_ok);
  const auto report = slurp(dir / "zero_compare.txt");
  CHECK(report.find("n/a") != std::string::npos);
  CHECK(report.find("window = [5, 25]") != std::string::npos);
  CHECK(fs::exists(dir / "zero_t2.dat"));
  CHECK(fs::exists(dir / "zero_compare.gp"));

  // identical runs give identical files
  auto dir2 = scratch("zero2");
  CHECK(run_cli("compare --scenario " + scn + " --out " + dir2.string()) == exit_ok);
  CHECK(slurp(dir2 / "zero_compare.txt") == report);
  CHECK(slurp(dir2 / "zero_t2.dat") == slurp(dir / "zero_t2.dat"));
}
