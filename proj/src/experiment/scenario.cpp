#include "msbc/experiment/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "msbc/errors.hpp"

namespace msbc {
namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ValidationError("scenario: " + key + " expects a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(x)) throw ValidationError("scenario: " + key + " expects a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  double x = to_number(key, v);
  if (x != std::floor(x) || std::fabs(x) > 1e9) throw ValidationError("scenario: " + key + " expects an integer");
  return int(x);
}

std::vector<double> to_list(const std::string& key, std::string v) {
  for (char& c : v)
    if (c == ',') c = ' ';
  std::istringstream is(v);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(to_number(key, tok));
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ValidationError("scenario: " + key + " expects true or false");
}

std::string fmt_num(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

BoundaryData Scenario::boundary_data() const {
  auto fn = [p = profile](double amp) -> TimeFunction {
    if (p == Profile::constant) return [amp](double) { return amp; };
    return [amp](double t) {
      double h = std::tanh(t);
      return amp * h * h;
    };
  };
  return {fn(a0), fn(b0), fn(aL), fn(bL)};
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  Scenario s;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(fmt::format("scenario line {}: unterminated section", lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "boundary" && section != "solver" && section != "derivation" &&
          section != "compare")
        throw ValidationError(fmt::format("scenario line {}: unknown section [{}]", lineno, section));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(fmt::format("scenario line {}: expected key = value", lineno));
    if (section.empty()) throw ValidationError(fmt::format("scenario line {}: key outside any section", lineno));
    const std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    const std::string full = section + "." + key;

    if (full == "scenario.name") {
      if (v.empty() || v.find_first_of("/\\ ") != std::string::npos)
        throw ValidationError("scenario: name must be non-empty without spaces or slashes");
      s.name = v;
    } else if (full == "scenario.length") s.grid.L = to_number(full, v);
    else if (full == "scenario.intervals") s.grid.n = to_int(full, v);
    else if (full == "scenario.t_end") s.t_end = to_number(full, v);
    else if (full == "scenario.snapshots") s.snapshots = to_list(full, v);
    else if (full == "boundary.profile") {
      if (v == "tanh2") s.profile = Profile::tanh2;
      else if (v == "constant") s.profile = Profile::constant;
      else throw ValidationError("scenario: profile must be tanh2 or constant");
    } else if (full == "boundary.a0") s.a0 = to_number(full, v);
    else if (full == "boundary.b0") s.b0 = to_number(full, v);
    else if (full == "boundary.aL") s.aL = to_number(full, v);
    else if (full == "boundary.bL") s.bL = to_number(full, v);
    else if (full == "solver.rtol") s.integrator.rtol = to_number(full, v);
    else if (full == "solver.atol") s.integrator.atol = to_number(full, v);
    else if (full == "solver.initial_step") s.integrator.initial_step = to_number(full, v);
    else if (full == "solver.robin_fallback") {
      if (v == "none") s.fallback = RobinFallback::none;
      else if (v == "vertex") s.fallback = RobinFallback::vertex;
      else throw ValidationError("scenario: robin_fallback must be none or vertex");
    } else if (full == "solver.execution") {
      if (v == "serial") s.execution = Execution::serial;
      else if (v == "parallel") s.execution = Execution::parallel;
      else throw ValidationError("scenario: execution must be serial or parallel");
    } else if (full == "derivation.order") s.order = to_int(full, v);
    else if (full == "derivation.source") {
      std::filesystem::path p(v);
      s.derivation_source = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else if (full == "compare.window") {
      auto w = to_list(full, v);
      if (w.size() != 2) throw ValidationError("scenario: window expects two numbers");
      s.window = {w[0], w[1]};
    } else if (full == "compare.linearised") s.linearised = to_bool(full, v);
    else throw ValidationError(fmt::format("scenario line {}: unknown key {}", lineno, full));
  }

  s.grid.validate();
  if (!(s.t_end > 0.0)) throw ValidationError("scenario: t_end must be positive");
  if (s.snapshots.empty()) s.snapshots.push_back(s.t_end);
  for (double t : s.snapshots)
    if (t < 0.0 || t > s.t_end) throw ValidationError("scenario: snapshot times must lie in [0, t_end]");
  if (!(s.integrator.rtol > 0.0) || !(s.integrator.atol > 0.0))
    throw ValidationError("scenario: rtol and atol must be positive");
  if (s.order < 2) throw ValidationError("scenario: derivation order must be at least 2");
  if (!(s.window.lo < s.window.hi) || s.window.lo < 0.0 || s.window.hi > s.grid.L)
    throw ValidationError("scenario: window must satisfy 0 <= lo < hi <= length");
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw ValidationError("cannot read scenario " + file.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_scenario(ss.str(), file.parent_path());
}

std::string to_text(const Scenario& s) {
  std::string snaps;
  for (double t : s.snapshots) snaps += (snaps.empty() ? "" : " ") + fmt_num(t);
  std::string out;
  out += fmt::format("[scenario]\nname = {}\nlength = {}\nintervals = {}\nt_end = {}\nsnapshots = {}\n", s.name,
                     fmt_num(s.grid.L), s.grid.n, fmt_num(s.t_end), snaps);
  out += fmt::format("[boundary]\nprofile = {}\na0 = {}\nb0 = {}\naL = {}\nbL = {}\n",
                     s.profile == Profile::tanh2 ? "tanh2" : "constant", fmt_num(s.a0), fmt_num(s.b0),
                     fmt_num(s.aL), fmt_num(s.bL));
  out += fmt::format("[solver]\nrtol = {}\natol = {}\ninitial_step = {}\nrobin_fallback = {}\nexecution = {}\n",
                     fmt_num(s.integrator.rtol), fmt_num(s.integrator.atol), fmt_num(s.integrator.initial_step),
                     s.fallback == RobinFallback::none ? "none" : "vertex",
                     s.execution == Execution::serial ? "serial" : "parallel");
  out += fmt::format("[derivation]\norder = {}\n", s.order);
  if (s.derivation_source) out += "source = " + s.derivation_source->string() + "\n";
  out += fmt::format("[compare]\nwindow = {} {}\nlinearised = {}\n", fmt_num(s.window.lo), fmt_num(s.window.hi),
                     s.linearised ? "true" : "false");
  return out;
}

}  // namespace msbc
