#include "msbc/pde/micro_solver.hpp"

#include "msbc/errors.hpp"

namespace msbc {

Trajectory<MicroState> solve_microscale(const MicroConfig& cfg) {
  cfg.grid.validate();
  const auto& d = cfg.data;
  if (!d.a0 || !d.b0 || !d.aL || !d.bL) throw ValidationError("micro: all four boundary functions are required");
  const auto times = output_times(cfg.snapshots, cfg.t_end);
  const int n = cfg.grid.n;
  const double dx = cfg.grid.dx();
  const auto& k = cfg.coefficients;

  std::vector<double> a(n + 1, 0.0), b(n + 1, 0.0);
  auto fill = [&](double t, const std::vector<double>& y) {
    for (int i = 1; i < n; ++i) {
      a[i] = y[2 * (i - 1)];
      b[i] = y[2 * (i - 1) + 1];
    }
    a[0] = d.a0(t);
    b[0] = d.b0(t);
    a[n] = d.aL(t);
    b[n] = d.bL(t);
  };

  BandedSystem sys;
  sys.n = 2 * (n - 1);
  sys.kl = sys.ku = 2;
  sys.rhs = [&](double t, const std::vector<double>& y, std::vector<double>& f) {
    fill(t, y);
    micro_rhs(cfg.execution, k, dx, n, a.data(), b.data(), f.data());
  };
  sys.jacobian = [&](double, const std::vector<double>& y, BandMatrix& J) {
    const double side = k.diffusion / (dx * dx), adv = 0.5 * k.advection / dx;
    for (int i = 1; i < n; ++i) {
      const int ra = 2 * (i - 1), rb = ra + 1;
      const double ai = y[ra], bi = y[rb];
      J.set(ra, ra, -k.exchange + 2.0 * k.reaction * ai - 2.0 * side);
      J.set(ra, rb, k.exchange);
      J.set(rb, rb, -k.exchange - 2.0 * k.reaction * bi - 2.0 * side);
      J.set(rb, ra, k.exchange);
      if (i > 1) {
        J.set(ra, ra - 2, side + adv);
        J.set(rb, rb - 2, side - adv);
      }
      if (i < n - 1) {
        J.set(ra, ra + 2, side - adv);
        J.set(rb, rb + 2, side + adv);
      }
    }
  };

  std::vector<double> y(std::size_t(sys.n), 0.0);
  for (int i = 1; i < n; ++i) {
    if (cfg.initial_a) y[2 * (i - 1)] = cfg.initial_a(cfg.grid.x(i));
    if (cfg.initial_b) y[2 * (i - 1) + 1] = cfg.initial_b(cfg.grid.x(i));
  }

  Trajectory<MicroState> out;
  auto record = [&](double t, const std::vector<double>& state) {
    fill(t, state);
    out.snapshots.push_back(MicroState{t, cfg.grid, a, b});
  };
  std::vector<double> targets = times;
  if (targets.front() == 0.0) {
    record(0.0, y);
    targets.erase(targets.begin());
  }
  if (!targets.empty()) out.stats = integrate_rosenbrock(sys, y, 0.0, targets, cfg.integrator, record);
  return out;
}

}  // namespace msbc
