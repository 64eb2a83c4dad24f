#include "msbc/experiment/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>
#include <variant>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "msbc/errors.hpp"
#include "msbc/pde/micro_solver.hpp"

namespace msbc {
namespace {

std::string time_tag(double t) { return fmt::format("{:g}", t); }

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + p.string());
  os << text;
}

std::string stats_text(const IntegrationStats& st) {
  return fmt::format("accepted_steps = {}\nrejected_steps = {}\nrhs_evaluations = {}\njacobians = {}\nstage_failures = {}\n",
                     st.accepted, st.rejected, st.rhs_evals, st.jacobian_evals, st.stage_failures);
}

struct RunResult {
  Mode mode;
  std::optional<Trajectory<MicroState>> micro;
  std::optional<MacroTrajectory> macro;
  std::string error;
  bool numerical_failure = false;
};

RunResult run_mode(const Scenario& s, Mode mode, const DerivedConditions* derived) {
  RunResult r{mode, std::nullopt, std::nullopt, "", false};
  try {
    if (mode == Mode::micro) r.micro = solve_microscale(micro_config(s));
    else r.macro = solve_macroscale(macro_config(s, mode, derived));
  } catch (const NumericalError& e) {
    r.error = e.what();
    r.numerical_failure = true;
  } catch (const StageFailure& e) {
    r.error = e.what();
    r.numerical_failure = true;
  }
  return r;
}

std::string fmt_metric(double v) { return fmt::format("{:.6e}", v); }

}  // namespace

MicroConfig micro_config(const Scenario& s) {
  MicroConfig c;
  c.grid = s.grid;
  c.t_end = s.t_end;
  c.data = s.boundary_data();
  c.snapshots = s.snapshots;
  c.integrator = s.integrator;
  c.execution = s.execution;
  return c;
}

MacroConfig macro_config(const Scenario& s, Mode mode, const DerivedConditions* derived) {
  MacroConfig c;
  c.grid = s.grid;
  c.t_end = s.t_end;
  c.snapshots = s.snapshots;
  c.integrator = s.integrator;
  c.execution = s.execution;
  c.fallback = s.fallback;
  std::tie(c.left, c.right) = macro_boundaries(s, mode, derived);
  return c;
}

Mode parse_mode(const std::string& s) {
  if (s == "micro") return Mode::micro;
  if (s == "macro-dirichlet") return Mode::macro_dirichlet;
  if (s == "macro-robin") return Mode::macro_robin;
  if (s == "macro-robin-linear") return Mode::macro_robin_linear;
  throw ValidationError("unknown mode '" + s + "'");
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::micro: return "micro";
    case Mode::macro_dirichlet: return "macro-dirichlet";
    case Mode::macro_robin: return "macro-robin";
    case Mode::macro_robin_linear: return "macro-robin-linear";
  }
  return "?";
}

std::string snapshot_file_name(const std::string& scenario, Mode mode, double t) {
  return fmt::format("{}_{}_t{}.csv", scenario, mode_name(mode), time_tag(t));
}

double ratio_threshold() {
  if (const char* env = std::getenv("MSBC_SEED_TOLERANCE")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) throw ValidationError("MSBC_SEED_TOLERANCE must be a positive number");
    return v;
  }
  return 0.5;
}

DerivedConditions derived_conditions(const Scenario& s) {
  DerivedConditions d;
  if (s.derivation_source) {
    std::tie(d.left, d.right) = load_robin(*s.derivation_source);
    d.provenance = "read from " + s.derivation_source->string() + "/robin.txt";
    std::ifstream xv(*s.derivation_source / "crossval.txt");
    std::string word;
    d.xval_verdict = (xv >> word >> word) ? word : "unknown";
  } else {
    DerivationOptions o;
    o.order = s.order;
    auto der = run_derivation(o);
    d.left = der.left;
    d.right = der.right;
    d.provenance = fmt::format("derived in process at order {}", s.order);
    d.xval_verdict = der.xval.identical ? "identical" : "different";
  }
  return d;
}

std::pair<MacroBoundary, MacroBoundary> macro_boundaries(const Scenario& s, Mode mode,
                                                         const DerivedConditions* derived) {
  auto data = s.boundary_data();
  switch (mode) {
    case Mode::micro:
      throw PreconditionError("macro_boundaries: the micro mode has no macroscale boundaries");
    case Mode::macro_dirichlet:
      return {MacroBoundary::dirichlet([data](double t) { return 0.5 * (data.a0(t) + data.b0(t)); }),
              MacroBoundary::dirichlet([data](double t) { return 0.5 * (data.aL(t) + data.bL(t)); })};
    case Mode::macro_robin:
    case Mode::macro_robin_linear: {
      if (!derived) throw PreconditionError("macro_boundaries: robin modes need derived conditions");
      RobinBC l = derived->left, r = derived->right;
      if (mode == Mode::macro_robin_linear) {
        l = linearised(l);
        r = linearised(r);
      }
      return {MacroBoundary::robin_condition([l, data](double t) { return specialize(l, data, t); }),
              MacroBoundary::robin_condition([r, data](double t) { return specialize(r, data, t); })};
    }
  }
  throw PreconditionError("macro_boundaries: unknown mode");
}

int cmd_derive(const DerivationOptions& opts, const std::filesystem::path& out, std::ostream& log) {
  auto d = run_derivation(opts);
  write_derivation(d, out);
  fmt::print(log, "derive: order {} written to {}\n", opts.order, out.string());
  fmt::print(log, "cross-validation: {} (max relative discrepancy {:.3e}, tolerance {:.1e})\n",
             d.xval.identical ? "identical" : "DIFFERENT", d.xval.max_discrepancy, d.xval.tolerance);
  if (!d.xval.identical) return exit_validation;
  return exit_ok;
}

int cmd_simulate(const std::filesystem::path& scenario, Mode mode, const std::filesystem::path& out,
                 std::ostream& log) {
  auto s = load_scenario(scenario);
  std::filesystem::create_directories(out);
  std::optional<DerivedConditions> derived;
  if (mode == Mode::macro_robin || mode == Mode::macro_robin_linear) derived = derived_conditions(s);
  auto r = run_mode(s, mode, derived ? &*derived : nullptr);

  std::string manifest = fmt::format("tool = {}\nmode = {}\n", kToolVersion, mode_name(mode));
  if (derived) manifest += "robin = " + derived->provenance + "\n";
  manifest += "# scenario\n" + to_text(s);
  if (!r.error.empty()) {
    manifest += "status = failed\nerror = " + r.error + "\n";
    write_text(out / fmt::format("{}_{}_manifest.txt", s.name, mode_name(mode)), manifest);
    fmt::print(log, "simulate {}: {}\n", mode_name(mode), r.error);
    return exit_numerical;
  }
  manifest += "status = ok\n# integration\n";
  if (r.micro) {
    manifest += stats_text(r.micro->stats);
    for (const auto& snap : r.micro->snapshots) {
      std::ostringstream os;
      write_csv_header(os);
      write_csv(os, snap);
      write_text(out / snapshot_file_name(s.name, mode, snap.t), os.str());
    }
  } else {
    manifest += stats_text(r.macro->stats);
    manifest += fmt::format("left_boundary_max_residual = {:.3e}\nleft_fallback_steps = {}\n",
                            r.macro->left.max_residual, r.macro->left.fallback_steps);
    manifest += fmt::format("right_boundary_max_residual = {:.3e}\nright_fallback_steps = {}\n",
                            r.macro->right.max_residual, r.macro->right.fallback_steps);
    for (const auto& snap : r.macro->snapshots) {
      std::ostringstream os;
      write_csv_header(os);
      write_csv(os, snap);
      write_text(out / snapshot_file_name(s.name, mode, snap.t), os.str());
    }
  }
  write_text(out / fmt::format("{}_{}_manifest.txt", s.name, mode_name(mode)), manifest);
  fmt::print(log, "simulate {}: {} snapshot(s) written to {}\n", mode_name(mode), s.snapshots.size(), out.string());
  return exit_ok;
}

int cmd_compare(const std::filesystem::path& scenario, const std::filesystem::path& out, std::optional<Window> window,
                std::ostream& log) {
  auto s = load_scenario(scenario);
  if (window) {
    if (!(window->lo < window->hi) || window->lo < 0.0 || window->hi > s.grid.L)
      throw ValidationError("compare: window must satisfy 0 <= lo < hi <= length");
    s.window = *window;
  }
  const double threshold = ratio_threshold();
  std::filesystem::create_directories(out);
  auto derived = derived_conditions(s);

  std::vector<Mode> modes{Mode::micro, Mode::macro_dirichlet, Mode::macro_robin};
  if (s.linearised) modes.push_back(Mode::macro_robin_linear);
  // Independent solves; results are joined before anything is written.
  std::vector<std::future<RunResult>> jobs;
  for (Mode m : modes) jobs.push_back(std::async(std::launch::async, run_mode, std::cref(s), m, &derived));
  std::vector<RunResult> runs;
  for (auto& j : jobs) runs.push_back(j.get());

  std::ostringstream rep;
  fmt::print(rep, "# {} compare report\n", kToolVersion);
  fmt::print(rep, "scenario = {}\nwindow = [{:g}, {:g}]\ngrid = L {:g}, n {}\n", s.name, s.window.lo, s.window.hi,
             s.grid.L, s.grid.n);
  fmt::print(rep, "derivation order = {}\nrobin = {}\nembedding cross-check = {}\n", s.order, derived.provenance,
             derived.xval_verdict);
  fmt::print(rep, "left robin: {}\nright robin: {}\n", robin_equation(derived.left, 3), robin_equation(derived.right, 3));
  fmt::print(rep, "robin fallback = {}\nratio threshold = {:g}\n\n",
             s.fallback == RobinFallback::none ? "none" : "vertex", threshold);

  bool numerical = false;
  for (const auto& r : runs) {
    if (!r.error.empty()) {
      numerical = true;
      fmt::print(rep, "run {} FAILED: {}\n", mode_name(r.mode), r.error);
    } else if (r.micro) {
      fmt::print(rep, "run {} ok: {} accepted steps\n", mode_name(r.mode), r.micro->stats.accepted);
    } else {
      fmt::print(rep, "run {} ok: {} accepted steps, boundary residual {:.1e}/{:.1e}, fallback steps {}/{}\n",
                 mode_name(r.mode), r.macro->stats.accepted, r.macro->left.max_residual, r.macro->right.max_residual,
                 r.macro->left.fallback_steps, r.macro->right.fallback_steps);
    }
  }
  fmt::print(rep, "\n{:>10} {:>20} {:>14} {:>14} {:>14}\n", "t", "mode", "Linf_mean", "L2_mean", "Linf_fields");

  const auto& micro = runs[0];
  bool verdict_fail = false;
  std::ostringstream gp;
  gp << "# gnuplot script: plots every snapshot of the comparison\nset xlabel 'x'\nset ylabel 'temperature'\nset key outside\n";
  for (std::size_t k = 0; k < s.snapshots.size(); ++k) {
    const double t = s.snapshots[k];
    std::map<Mode, ErrorMetrics> metrics;
    if (micro.micro) {
      for (std::size_t i = 1; i < runs.size(); ++i) {
        if (!runs[i].macro) continue;
        auto e = interior_error(micro.micro->snapshots[k], runs[i].macro->snapshots[k], s.window);
        metrics[runs[i].mode] = e;
        fmt::print(rep, "{:>10g} {:>20} {:>14} {:>14} {:>14}\n", t, mode_name(runs[i].mode), fmt_metric(e.linf_mean),
                   fmt_metric(e.l2_mean), fmt_metric(e.linf_fields));
      }
    }
    for (Mode m : {Mode::macro_robin, Mode::macro_robin_linear}) {
      if (!metrics.count(m) || !metrics.count(Mode::macro_dirichlet)) continue;
      const auto& a = metrics[m];
      const auto& b = metrics[Mode::macro_dirichlet];
      auto ratio = [](double x, double y) { return y == 0.0 ? std::string("n/a") : fmt::format("{:.6f}", x / y); };
      fmt::print(rep, "{:>10g} ratio {}/{}: Linf {} L2 {} fields {}\n", t, mode_name(m), "macro-dirichlet",
                 ratio(a.linf_mean, b.linf_mean), ratio(a.l2_mean, b.l2_mean), ratio(a.linf_fields, b.linf_fields));
      if (m == Mode::macro_robin && b.linf_mean != 0.0 && a.linf_mean / b.linf_mean > threshold) verdict_fail = true;
    }

    // Columnar overlay: x a b mean C per macro mode.
    std::ostringstream dat;
    dat << "# x a b mean";
    for (std::size_t i = 1; i < runs.size(); ++i) dat << ' ' << mode_name(runs[i].mode);
    dat << '\n';
    for (int i = 0; i <= s.grid.n; ++i) {
      fmt::print(dat, "{:.12g}", s.grid.x(i));
      if (micro.micro) {
        const auto& ms = micro.micro->snapshots[k];
        fmt::print(dat, " {:.12g} {:.12g} {:.12g}", ms.a[i], ms.b[i], 0.5 * (ms.a[i] + ms.b[i]));
      } else {
        dat << " nan nan nan";
      }
      for (std::size_t j = 1; j < runs.size(); ++j) {
        if (runs[j].macro) fmt::print(dat, " {:.12g}", runs[j].macro->snapshots[k].C[i]);
        else dat << " nan";
      }
      dat << '\n';
    }
    const std::string dat_name = fmt::format("{}_t{}.dat", s.name, time_tag(t));
    write_text(out / dat_name, dat.str());
    gp << fmt::format("set title '{} t = {}'\nplot '{}' u 1:2 w l t 'a', '' u 1:3 w l t 'b', '' u 1:4 w l t 'mean'", s.name,
                      time_tag(t), dat_name);
    for (std::size_t j = 1; j < runs.size(); ++j)
      gp << fmt::format(", '' u 1:{} w l t '{}'", 4 + j, mode_name(runs[j].mode));
    gp << "\npause -1\n";
  }
  write_text(out / fmt::format("{}_compare.gp", s.name), gp.str());

  std::string verdict = numerical ? "FAILED (sub-run failure)"
                                  : verdict_fail ? "FAILED (ratio above threshold)" : "ok";
  fmt::print(rep, "\nverdict = {}\n", verdict);
  write_text(out / fmt::format("{}_compare.txt", s.name), rep.str());
  fmt::print(log, "compare {}: {}\n", s.name, verdict);
  if (numerical) return exit_numerical;
  return verdict_fail ? exit_validation : exit_ok;
}

}  // namespace msbc
