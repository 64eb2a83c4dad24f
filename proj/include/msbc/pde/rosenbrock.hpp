#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "msbc/pde/band_matrix.hpp"

namespace msbc {

struct IntegratorOptions {
  double rtol = 1e-8;
  double atol = 1e-8;
  double initial_step = 1e-6;
  double min_step = 1e-13;  // relative to max(1, |t|)
  long max_steps = 2'000'000;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
  long jacobian_evals = 0;
  long stage_failures = 0;  // stages whose closure threw; the step was retried smaller
};

// dy/dt = f(t, y) with a banded Jacobian. jacobian fills df/dy at (t, y).
// accepted sees every step that passed the error test before it is committed;
// it may update closure state, throw StageFailure to reject the step, or throw
// anything else to abort.
struct BandedSystem {
  int n = 0, kl = 0, ku = 0;
  std::function<void(double, const std::vector<double>&, std::vector<double>&)> rhs;
  std::function<void(double, const std::vector<double>&, BandMatrix&)> jacobian;
  std::function<void(double, const std::vector<double>&)> accepted;
};

// Raised by a right-hand side when a stage state is outside its domain; the
// integrator rejects the step and retries with a smaller one.
struct StageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Four-stage L-stable Rosenbrock method with embedded third-order error
// estimate (Shampine's coefficients) and a Gustafsson step controller. Every
// time in `outputs` is hit exactly; `on_output` is called with the state there.
IntegrationStats integrate_rosenbrock(const BandedSystem& sys, std::vector<double>& y, double t0,
                                      const std::vector<double>& outputs, const IntegratorOptions& opts,
                                      const std::function<void(double, const std::vector<double>&)>& on_output);

}  // namespace msbc
