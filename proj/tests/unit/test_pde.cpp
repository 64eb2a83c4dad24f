#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "msbc/pde/band_matrix.hpp"
#include "msbc/pde/kernels.hpp"
#include "msbc/pde/macro_solver.hpp"
#include "msbc/pde/metrics.hpp"
#include "msbc/pde/micro_solver.hpp"
#include "msbc/spatial/spatial_system.hpp"
#include "oracles.hpp"

using namespace msbc;

namespace {

using std::numbers::pi;

auto constant(double v) {
  return [v](double) { return v; };
}

double ramp(double t) { return 0.2 * std::tanh(t) * std::tanh(t); }

BoundaryData scenario_data() { return oracle::ramped_data(); }

IntegratorOptions tight(double tol) {
  IntegratorOptions o;
  o.rtol = o.atol = tol;
  return o;
}

double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::fabs(x[i] - y[i]));
  return m;
}

}  // namespace

TEST_CASE("zero data gives identically zero trajectories") {
  MicroConfig mc;
  mc.grid = Grid1D(30.0, 60);
  mc.t_end = 5.0;
  mc.snapshots = {1.0, 5.0};
  mc.data = {constant(0.0), constant(0.0), constant(0.0), constant(0.0)};
  auto micro = solve_microscale(mc);
  REQUIRE(micro.snapshots.size() == 2);
  for (const auto& s : micro.snapshots) {
    CHECK(std::all_of(s.a.begin(), s.a.end(), [](double v) { return v == 0.0; }));
    CHECK(std::all_of(s.b.begin(), s.b.end(), [](double v) { return v == 0.0; }));
  }

  MacroConfig cc;
  cc.grid = Grid1D(30.0, 60);
  cc.t_end = 5.0;
  cc.left = MacroBoundary::dirichlet(constant(0.0));
  cc.right = MacroBoundary::dirichlet(constant(0.0));
  auto macro = solve_macroscale(cc);
  for (double v : macro.snapshots.back().C) CHECK(v == 0.0);
}

TEST_CASE("micro snapshots carry the Dirichlet data at their time") {
  MicroConfig cfg;
  cfg.grid = Grid1D(30.0, 60);
  cfg.t_end = 3.0;
  cfg.snapshots = {0.0, 0.5, 3.0};
  cfg.data = scenario_data();
  auto traj = solve_microscale(cfg);
  REQUIRE(traj.snapshots.size() == 3);
  for (const auto& s : traj.snapshots) {
    CHECK(s.a.front() == ramp(s.t));
    CHECK(s.b.front() == 0.0);
    CHECK(s.a.back() == 0.0);
    CHECK(s.b.back() == ramp(s.t));
  }
  CHECK(traj.snapshots[1].t == 0.5);
}

TEST_CASE("linear micro steady state matches a direct boundary-value solve") {
  const Grid1D g(10.0, 512);
  const double a0 = 0.2, b0 = -0.1, aL = 0.05, bL = 0.3;
  const auto s = oracle::linear_micro_steady(g, a0, b0, aL, bL);
  auto [a, b] = oracle::discrete_steady(g, a0, b0, aL, bL);
  CHECK(max_abs_diff(s.a, a) <= 1e-6);
  CHECK(max_abs_diff(s.b, b) <= 1e-6);
  // The continuous solution differs by the O(dx^2) discretisation error.
  auto [ca, cb] = oracle::continuous_steady(g, a0, b0, aL, bL);
  CHECK(max_abs_diff(s.a, ca) <= 1e-4);
  CHECK(max_abs_diff(s.b, cb) <= 1e-4);
}

TEST_CASE("macro solver converges at second order on a manufactured solution") {
  for (bool robin : {false, true}) {
    CAPTURE(robin);
    auto r1 = oracle::manufactured_run(40, robin), r2 = oracle::manufactured_run(80, robin),
         r3 = oracle::manufactured_run(160, robin);
    CAPTURE(r1.max_error);
    CAPTURE(r3.max_error);
    CHECK(std::log2(r1.max_error / r2.max_error) >= 1.9);
    CHECK(std::log2(r2.max_error / r3.max_error) >= 1.9);
    if (robin) CHECK(std::max({r1.boundary_residual, r2.boundary_residual, r3.boundary_residual}) <= 1e-9);
  }
}

TEST_CASE("micro solver self-convergence on the ramped scenario") {
  auto s1 = oracle::ramped_micro(75, 21.0), s2 = oracle::ramped_micro(150, 21.0), s3 = oracle::ramped_micro(300, 21.0);
  const double d12 = oracle::refinement_difference(s1, s2, 5.0, 25.0);
  const double d23 = oracle::refinement_difference(s2, s3, 5.0, 25.0);
  CAPTURE(d12);
  CAPTURE(d23);
  CHECK(std::log2(d12 / d23) >= 1.9);
}

TEST_CASE("exchange-only micro system conserves the total") {
  MicroConfig cfg;
  cfg.grid = Grid1D(30.0, 120);
  cfg.t_end = 4.0;
  cfg.snapshots = {0.0, 4.0};
  cfg.coefficients = {0.5, 0.0, 0.0, 0.0};
  cfg.integrator = tight(1e-10);
  cfg.data = {constant(0.0), constant(0.0), constant(0.0), constant(0.0)};
  cfg.initial_a = [](double x) { return std::sin(pi * x / 30.0); };
  cfg.initial_b = [](double x) { return 0.1 * x / 30.0; };
  auto traj = solve_microscale(cfg);
  auto total = [](const MicroState& s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.a.size(); ++i) sum += (s.a[i] + s.b[i]) * s.grid.dx();
    return sum;
  };
  const double t0 = total(traj.snapshots.front()), t1 = total(traj.snapshots.back());
  CHECK(std::fabs(t1 - t0) <= 1e-8 * std::fabs(t0));
  // and the exchange did happen
  CHECK(std::fabs(traj.snapshots.back().a[60] - traj.snapshots.back().b[60]) < 0.2);
}

TEST_CASE("microscale boundary layers are sharper than the interior") {
  const auto s = oracle::ramped_micro(300, 21.0);
  std::vector<double> interior;
  double left = 0.0, right = 0.0;
  for (int i = 0; i <= s.grid.n; ++i) {
    const double x = s.grid.x(i), d = std::fabs(s.a[i] - s.b[i]);
    if (x <= 2.0) left = std::max(left, d);
    if (x >= 28.0) right = std::max(right, d);
    if (x >= 5.0 && x <= 25.0) interior.push_back(d);
  }
  std::nth_element(interior.begin(), interior.begin() + interior.size() / 2, interior.end());
  const double median = interior[interior.size() / 2];
  CHECK(left > median);
  CHECK(right > median);
}

TEST_CASE("serial and parallel kernels agree bitwise") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {16, 300, 2048}) {
    std::vector<double> a(n + 1), b(n + 1), C(n + 1), src(n + 1);
    for (int i = 0; i <= n; ++i) a[i] = u(rng), b[i] = u(rng), C[i] = u(rng), src[i] = u(rng);
    std::vector<double> y1(2 * (n - 1)), y2(2 * (n - 1)), c1(n - 1), c2(n - 1);
    MicroCoefficients k;
    micro_rhs_serial(k, 0.05, n, a.data(), b.data(), y1.data());
    micro_rhs_parallel(k, 0.05, n, a.data(), b.data(), y2.data());
    CHECK(y1 == y2);
    macro_rhs_serial(0.05, n, C.data(), src.data(), c1.data());
    macro_rhs_parallel(0.05, n, C.data(), src.data(), c2.data());
    CHECK(c1 == c2);
    macro_rhs_serial(0.05, n, C.data(), nullptr, c1.data());
    macro_rhs_parallel(0.05, n, C.data(), nullptr, c2.data());
    CHECK(c1 == c2);
  }

  MicroConfig cfg;
  cfg.grid = Grid1D(30.0, 300);
  cfg.t_end = 2.0;
  cfg.data = scenario_data();
  cfg.execution = Execution::serial;
  auto s = solve_microscale(cfg).snapshots.back();
  cfg.execution = Execution::parallel;
  auto p = solve_microscale(cfg).snapshots.back();
  CHECK(s.a == p.a);
  CHECK(s.b == p.b);
}

TEST_CASE("micro kernel matches the pointwise formula") {
  const int n = 10;
  const double dx = 0.5;
  std::vector<double> a(n + 1), b(n + 1), dy(2 * (n - 1));
  for (int i = 0; i <= n; ++i) a[i] = std::sin(i * 0.3), b[i] = std::cos(i * 0.7);
  micro_rhs_serial(MicroCoefficients{}, dx, n, a.data(), b.data(), dy.data());
  for (int i = 1; i < n; ++i) {
    const double ax = (a[i + 1] - a[i - 1]) / (2 * dx), axx = (a[i + 1] - 2 * a[i] + a[i - 1]) / (dx * dx);
    const double bx = (b[i + 1] - b[i - 1]) / (2 * dx), bxx = (b[i + 1] - 2 * b[i] + b[i - 1]) / (dx * dx);
    CHECK(dy[2 * (i - 1)] == doctest::Approx(0.5 * (b[i] - a[i]) + 0.5 * a[i] * a[i] - ax + 3 * axx));
    CHECK(dy[2 * (i - 1) + 1] == doctest::Approx(0.5 * (a[i] - b[i]) - 0.5 * b[i] * b[i] + bx + 3 * bxx));
  }
}

TEST_CASE("field reconstruction") {
  const Grid1D g(30.0, 30);
  MacroState zero{1.0, g, std::vector<double>(31, 0.0)};
  auto z = reconstruct_micro(zero);
  CHECK(z.t == 1.0);
  for (int i = 0; i <= 30; ++i) CHECK((z.a[i] == 0.0 && z.b[i] == 0.0));

  const double c = 0.3;
  auto k = reconstruct_micro(MacroState{0.0, g, std::vector<double>(31, c)});
  for (int i = 0; i <= 30; ++i) {
    CHECK(k.a[i] == doctest::Approx(c + c * c / 2));
    CHECK(k.b[i] == doctest::Approx(c - c * c / 2));
  }

  const double alpha = 0.01;
  MacroState lin{0.0, g, {}};
  for (int i = 0; i <= 30; ++i) lin.C.push_back(alpha * g.x(i));
  auto l = reconstruct_micro(lin);
  for (int i = 0; i <= 30; ++i) {
    const double x = g.x(i);
    CHECK(l.a[i] == doctest::Approx(alpha * x + alpha * alpha * x * x / 2 - alpha).epsilon(1e-12));
    CHECK(l.b[i] == doctest::Approx(alpha * x - alpha * alpha * x * x / 2 + alpha).epsilon(1e-12));
  }
}

TEST_CASE("interior error metrics") {
  const Grid1D g(30.0, 90);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  MacroState macro{21.0, g, {}};
  for (int i = 0; i <= g.n; ++i) macro.C.push_back(u(rng));
  auto exact = reconstruct_micro(macro);
  auto e0 = interior_error(exact, macro);
  CHECK(e0.linf_mean <= 1e-16);
  CHECK(e0.linf_fields == 0.0);

  MicroState micro{21.0, g, {}, {}};
  for (int i = 0; i <= g.n; ++i) micro.a.push_back(u(rng)), micro.b.push_back(u(rng));
  auto s = interior_error(micro, macro), t = interior_error_sorted(micro, macro);
  CHECK(s.linf_mean == t.linf_mean);
  CHECK(s.linf_fields == t.linf_fields);
  CHECK(s.l2_mean == doctest::Approx(t.l2_mean).epsilon(1e-13));

  // direct check of the window bounds
  double m = 0.0;
  for (int i = 0; i <= g.n; ++i)
    if (g.x(i) >= 5.0 && g.x(i) <= 25.0) m = std::max(m, std::fabs(macro.C[i] - 0.5 * (micro.a[i] + micro.b[i])));
  CHECK(s.linf_mean == m);

  CHECK_THROWS_AS(interior_error(micro, macro, Window{10.1, 10.2}), ValidationError);
  MacroState other = macro;
  other.t = 20.0;
  CHECK_THROWS_AS(interior_error(micro, other), StructuralError);
  MacroState coarse{21.0, Grid1D(30.0, 45), std::vector<double>(46, 0.0)};
  CHECK_THROWS_AS(interior_error(micro, coarse), StructuralError);
}

TEST_CASE("Robin closure derivatives match finite differences") {
  const double dx = 0.05;
  for (Side side : {Side::left, Side::right}) {
    RobinClosure cl(side, dx, RobinFallback::none);
    const NumericRobin bc = side == Side::left ? NumericRobin{0.65, 3.0, 0.1} : NumericRobin{-0.35, -3.0, 0.12};
    const double near = 0.12, far = 0.125;
    auto r = cl.solve(bc, near, far);
    REQUIRE(r.converged);
    CHECK(std::fabs(r.residual) < 1e-13);
    const double h = 1e-6;
    const double dn = (cl.solve(bc, near + h, far).boundary - cl.solve(bc, near - h, far).boundary) / (2 * h);
    const double df = (cl.solve(bc, near, far + h).boundary - cl.solve(bc, near, far - h).boundary) / (2 * h);
    CHECK(r.d_near == doctest::Approx(dn).epsilon(1e-7));
    CHECK(r.d_far == doctest::Approx(df).epsilon(1e-7));
    // the one-sided slope reproduces q
    const double slope = side == Side::left ? (-3 * r.boundary + 4 * near - far) / (2 * dx)
                                            : (3 * r.boundary - 4 * near + far) / (2 * dx);
    CHECK(slope == doctest::Approx(r.q).epsilon(1e-10));
  }
}

TEST_CASE("Robin closure without a real root") {
  // C - 0.5 q - 3 q^2 = R has no root for large R.
  RobinClosure strict(Side::left, 0.05, RobinFallback::none);
  CHECK_THROWS_AS(strict.solve(NumericRobin{0.5, 3.0, 1.0}, 0.0, 0.0), StageFailure);
  RobinClosure vertex(Side::left, 0.05, RobinFallback::vertex);
  auto r = vertex.solve(NumericRobin{0.5, 3.0, 1.0}, 0.0, 0.0);
  CHECK(r.fallback);
  CHECK(r.q == doctest::Approx(-(0.5 + 2 * 0.05 / 3) / 6.0));
}

TEST_CASE("band solve agrees with a dense solve") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 40, kl = 2, ku = 1;
  BandMatrix B(n, kl, ku);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
      const double v = (i == j ? 4.0 : 0.0) + u(rng);
      B.set(i, j, v);
      D(i, j) = v;
    }
  CHECK_THROWS_AS(B.set(0, 5, 1.0), StructuralError);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  auto bx = B.multiply(x);
  Eigen::VectorXd dx = D * Eigen::Map<Eigen::VectorXd>(x.data(), n);
  for (int i = 0; i < n; ++i) CHECK(bx[i] == doctest::Approx(dx(i)).epsilon(1e-14));

  std::vector<double> rhs(n);
  for (auto& v : rhs) v = u(rng);
  Eigen::VectorXd ref = D.partialPivLu().solve(Eigen::Map<Eigen::VectorXd>(rhs.data(), n));
  REQUIRE(B.factorize());
  B.solve(rhs);
  for (int i = 0; i < n; ++i) CHECK(rhs[i] == doctest::Approx(ref(i)).epsilon(1e-12));
}

TEST_CASE("Rosenbrock integrator on a scalar problem") {
  BandedSystem sys;
  sys.n = 1;
  sys.kl = sys.ku = 0;
  sys.rhs = [](double t, const std::vector<double>& y, std::vector<double>& f) { f[0] = -y[0] + std::cos(t); };
  sys.jacobian = [](double, const std::vector<double>&, BandMatrix& J) { J.set(0, 0, -1.0); };
  std::vector<double> y{1.0};
  std::vector<double> seen;
  auto stats = integrate_rosenbrock(sys, y, 0.0, {0.5, 2.0}, tight(1e-10),
                                    [&](double t, const std::vector<double>&) { seen.push_back(t); });
  CHECK(seen == std::vector<double>{0.5, 2.0});
  // y = (cos t + sin t)/2 + e^{-t}/2
  CHECK(y[0] == doctest::Approx(0.5 * (std::cos(2.0) + std::sin(2.0)) + 0.5 * std::exp(-2.0)).epsilon(1e-8));
  CHECK(stats.accepted > 0);

  // a right-hand side that always fails collapses the step
  sys.rhs = [](double, const std::vector<double>&, std::vector<double>&) { throw StageFailure("out of domain"); };
  y = {1.0};
  CHECK_THROWS_AS(integrate_rosenbrock(sys, y, 0.0, {1.0}, {}, {}), NumericalError);
}

TEST_CASE("output times and grid validation") {
  CHECK(output_times({3.0, 1.0, 3.0}, 5.0) == std::vector<double>{1.0, 3.0});
  CHECK(output_times({}, 5.0) == std::vector<double>{5.0});
  CHECK_THROWS(output_times({6.0}, 5.0));
  CHECK_THROWS_AS(Grid1D(30.0, 4), ValidationError);
  CHECK_THROWS_AS(Grid1D(-1.0, 10), ValidationError);
  CHECK(Grid1D(30.0, 600).dx() == 0.05);
}
