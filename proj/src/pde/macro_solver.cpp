#include "msbc/pde/macro_solver.hpp"

#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "msbc/errors.hpp"

namespace msbc {

// Left:  C_0 = (4 C_1 - C_2 - 2 dx q) / 3 turns the condition into
//        Q q^2 + (P + 2dx/3) q + R - (4 C_1 - C_2)/3 = 0.
// Right: C_n = (4 C_{n-1} - C_{n-2} + 2 dx q) / 3 gives the same with -2dx/3.
RobinClosure::Result RobinClosure::solve(const NumericRobin& bc, double near, double far) const {
  const double sgn = side_ == Side::left ? -1.0 : 1.0;
  const double extrap = (4.0 * near - far) / 3.0;
  const double Q = bc.Q, b = bc.P - sgn * 2.0 * dx_ / 3.0, c = bc.R - extrap;
  auto F = [&](double q) { return (Q * q + b) * q + c; };

  Result r;
  double q = q_prev_;
  if (Q == 0.0) {
    if (b == 0.0) throw StageFailure("robin closure: degenerate linear condition");
    q = -c / b;
    r.converged = true;
  } else {
    const double scale = std::max({1.0, std::fabs(c), std::fabs(b * q)});
    for (r.iterations = 0; r.iterations < kRobinMaxIterations; ++r.iterations) {
      double f = F(q);
      if (std::fabs(f) <= 1e-14 * std::max(scale, std::fabs(Q * q * q))) {
        r.converged = true;
        break;
      }
      double df = 2.0 * Q * q + b;
      if (df == 0.0) break;
      double step = -f / df, lambda = 1.0;
      while (lambda > 1e-12 && std::fabs(F(q + lambda * step)) >= std::fabs(f)) lambda *= 0.5;
      if (lambda <= 1e-12) break;  // no descent: the quadratic has no real root near q
      q += lambda * step;
    }
    if (!r.converged) {
      const bool no_root = b * b - 4.0 * Q * c < 0.0;
      if (fallback_ == RobinFallback::vertex && no_root) {
        q = -b / (2.0 * Q);
        r.fallback = true;
      } else {
        throw StageFailure(fmt::format("robin closure ({}): Newton failed after {} iterations, residual {:.3e}",
                                       side_ == Side::left ? "left" : "right", r.iterations, F(q)));
      }
    }
  }
  r.q = q;
  r.boundary = extrap + sgn * 2.0 * dx_ * q / 3.0;
  // q(c) with c = R - (4 near - far)/3; the vertex does not depend on c.
  const double dq_dc = r.fallback ? 0.0 : -1.0 / (2.0 * Q * q + b);
  r.d_near = 4.0 / 3.0 + sgn * 2.0 * dx_ / 3.0 * dq_dc * (-4.0 / 3.0);
  r.d_far = -1.0 / 3.0 + sgn * 2.0 * dx_ / 3.0 * dq_dc * (1.0 / 3.0);
  r.residual = r.boundary - bc.P * q - bc.Q * q * q - bc.R;
  return r;
}

namespace {

struct EndClosure {
  const MacroBoundary* spec;
  std::optional<RobinClosure> robin;
  BoundaryStats* stats;
};

}  // namespace

MacroTrajectory solve_macroscale(const MacroConfig& cfg) {
  cfg.grid.validate();
  const auto times = output_times(cfg.snapshots, cfg.t_end);
  const int n = cfg.grid.n;
  const double dx = cfg.grid.dx();
  MacroTrajectory out;

  EndClosure ends[2] = {{&cfg.left, std::nullopt, &out.left}, {&cfg.right, std::nullopt, &out.right}};
  for (int s = 0; s < 2; ++s) {
    const auto& spec = *ends[s].spec;
    if (spec.kind == MacroBoundary::Kind::dirichlet && !spec.value)
      throw ValidationError("macro: dirichlet boundary without a value function");
    if (spec.kind == MacroBoundary::Kind::robin) {
      if (!spec.robin) throw ValidationError("macro: robin boundary without coefficients");
      ends[s].robin.emplace(s == 0 ? Side::left : Side::right, dx, cfg.fallback);
    }
  }

  std::vector<double> C(n + 1, 0.0), src(cfg.source ? n + 1 : 0, 0.0);
  RobinClosure::Result closed[2];

  // Fills C from the interior unknowns and closes both ends at time t.
  auto fill = [&](double t, const std::vector<double>& y) {
    for (int i = 1; i < n; ++i) C[i] = y[i - 1];
    for (int s = 0; s < 2; ++s) {
      const int node = s == 0 ? 0 : n, near = s == 0 ? 1 : n - 1, far = s == 0 ? 2 : n - 2;
      if (ends[s].robin) {
        closed[s] = ends[s].robin->solve(ends[s].spec->robin(t), C[near], C[far]);
        C[node] = closed[s].boundary;
      } else {
        C[node] = ends[s].spec->value(t);
      }
    }
  };

  BandedSystem sys;
  sys.n = n - 1;
  sys.kl = sys.ku = 1;
  sys.rhs = [&](double t, const std::vector<double>& y, std::vector<double>& f) {
    fill(t, y);
    if (cfg.source)
      for (int i = 0; i <= n; ++i) src[i] = cfg.source(cfg.grid.x(i), t);
    macro_rhs(cfg.execution, dx, n, C.data(), cfg.source ? src.data() : nullptr, f.data());
  };
  sys.jacobian = [&](double t, const std::vector<double>& y, BandMatrix& J) {
    fill(t, y);
    const double inv2dx = 0.5 / dx, invdx2 = 1.0 / (dx * dx);
    for (int i = 1; i < n; ++i) {
      const int r = i - 1;
      const double c = C[i], cx = (C[i + 1] - C[i - 1]) * inv2dx;
      const double lo = 2.0 * c * inv2dx + 4.0 * invdx2, hi = -2.0 * c * inv2dx + 4.0 * invdx2;
      J.add(r, r, 1.5 * c * c - 2.0 * cx - 8.0 * invdx2);
      if (i > 1) J.add(r, r - 1, lo);
      else if (ends[0].robin) {
        J.add(r, r, lo * closed[0].d_near);
        J.add(r, r + 1, lo * closed[0].d_far);
      }
      if (i < n - 1) J.add(r, r + 1, hi);
      else if (ends[1].robin) {
        J.add(r, r, hi * closed[1].d_near);
        J.add(r, r - 1, hi * closed[1].d_far);
      }
    }
  };
  auto accept = [&](double t, const std::vector<double>& y) {
    fill(t, y);
    for (int s = 0; s < 2; ++s) {
      if (!ends[s].robin) continue;
      auto& st = *ends[s].stats;
      st.newton_iterations += closed[s].iterations;
      if (closed[s].fallback) ++st.fallback_steps;
      else st.max_residual = std::max(st.max_residual, std::fabs(closed[s].residual));
      ends[s].robin->accept(closed[s]);
    }
  };
  sys.accepted = accept;

  std::vector<double> y(std::size_t(n - 1), 0.0);
  if (cfg.initial)
    for (int i = 1; i < n; ++i) y[i - 1] = cfg.initial(cfg.grid.x(i));
  try {
    accept(0.0, y);
  } catch (const StageFailure& e) {
    throw NumericalError(fmt::format("macro: boundary closure failed for the initial state: {}", e.what()));
  }

  auto record = [&](double t, const std::vector<double>& state) {
    fill(t, state);
    out.snapshots.push_back(MacroState{t, cfg.grid, C});
  };
  std::vector<double> targets = times;
  if (targets.front() == 0.0) {
    record(0.0, y);
    targets.erase(targets.begin());
  }
  if (!targets.empty()) {
    auto stats = integrate_rosenbrock(sys, y, 0.0, targets, cfg.integrator, record);
    out.stats = stats;
  }
  return out;
}

}  // namespace msbc
