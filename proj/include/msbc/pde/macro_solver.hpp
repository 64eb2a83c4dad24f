#pragma once

#include <functional>
#include <vector>

#include "msbc/boundary/boundary.hpp"
#include "msbc/pde/kernels.hpp"
#include "msbc/pde/states.hpp"

namespace msbc {

// What to do when the Robin quadratic has no real root for the current
// interior values. `none` treats it as a numerical failure; `vertex` uses the
// slope minimising the residual, -b / (2Q), and counts the event.
enum class RobinFallback { none, vertex };

struct MacroBoundary {
  enum class Kind { dirichlet, robin };
  Kind kind = Kind::dirichlet;
  std::function<double(double)> value;         // dirichlet: C(t)
  std::function<NumericRobin(double)> robin;   // robin: P, Q, R at time t

  static MacroBoundary dirichlet(std::function<double(double)> v) {
    return {Kind::dirichlet, std::move(v), {}};
  }
  static MacroBoundary robin_condition(std::function<NumericRobin(double)> r) {
    return {Kind::robin, {}, std::move(r)};
  }
};

struct MacroConfig {
  Grid1D grid;
  double t_end = 21.0;
  MacroBoundary left, right;
  std::vector<double> snapshots;
  IntegratorOptions integrator;
  Execution execution = Execution::parallel;
  RobinFallback fallback = RobinFallback::none;
  std::function<double(double, double)> source;  // (x, t), added to the right-hand side
  std::function<double(double)> initial;         // C(x, 0); zero when empty
};

struct BoundaryStats {
  double max_residual = 0.0;  // over accepted steps closed by a root
  long fallback_steps = 0;    // accepted steps closed by the vertex
  long newton_iterations = 0;
};

struct MacroTrajectory : Trajectory<MacroState> {
  BoundaryStats left, right;
};

// Closure of a Robin condition C - P Cx - Q Cx^2 = R at one end, with Cx from
// the second-order one-sided stencil. Solves for the slope q and the boundary
// value by damped Newton started from the slope of the last accepted step.
class RobinClosure {
 public:
  struct Result {
    double q = 0.0;
    double boundary = 0.0;      // C_0 or C_n
    double d_near = 0.0;        // d boundary / d C_1 (or C_{n-1})
    double d_far = 0.0;         // d boundary / d C_2 (or C_{n-2})
    double residual = 0.0;      // C - P q - Q q^2 - R
    int iterations = 0;
    bool converged = false;
    bool fallback = false;
  };

  RobinClosure(Side side, double dx, RobinFallback fallback) : side_(side), dx_(dx), fallback_(fallback) {}

  // near = C_1, far = C_2 on the left; near = C_{n-1}, far = C_{n-2} on the right.
  Result solve(const NumericRobin& bc, double near, double far) const;
  void accept(const Result& r) { q_prev_ = r.q; }
  double previous_slope() const { return q_prev_; }

 private:
  Side side_;
  double dx_;
  RobinFallback fallback_;
  double q_prev_ = 0.0;
};

inline constexpr int kRobinMaxIterations = 50;

MacroTrajectory solve_macroscale(const MacroConfig& cfg);

}  // namespace msbc
