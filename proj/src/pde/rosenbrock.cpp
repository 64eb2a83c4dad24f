#include "msbc/pde/rosenbrock.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "msbc/errors.hpp"

namespace msbc {
namespace {

struct Coefficients {
  static constexpr double gamma = 0.25;
  static constexpr double d1 = 0.25, d2 = -0.1043, d3 = 0.1035, d4 = -0.3620000000000023e-01;
  static constexpr double c2 = 0.386, c3 = 0.21, c4 = 0.63;
  static constexpr double c21 = -0.5668800000000000e+01;
  static constexpr double a21 = 0.1544000000000000e+01;
  static constexpr double c31 = -0.2430093356833875e+01, c32 = -0.2063599157091915e+00;
  static constexpr double a31 = 0.9466785280815826e+00, a32 = 0.2557011698983284e+00;
  static constexpr double c41 = -0.1073529058151375e+00, c42 = -0.9594562251023355e+01,
                          c43 = -0.2047028614809616e+02;
  static constexpr double a41 = 0.3314825187068521e+01, a42 = 0.2896124015972201e+01,
                          a43 = 0.9986419139977817e+00;
  static constexpr double c51 = 0.7496443313967647e+01, c52 = -0.1024680431464352e+02,
                          c53 = -0.3399990352819905e+02, c54 = 0.1170890893206160e+02;
  static constexpr double a51 = 0.1221224509226641e+01, a52 = 0.6019134481288629e+01,
                          a53 = 0.1253708332932087e+02, a54 = -0.6878860361058950e+00;
  static constexpr double c61 = 0.8083246795921522e+01, c62 = -0.7981132988064893e+01,
                          c63 = -0.3152159432874371e+02, c64 = 0.1631930543123136e+02,
                          c65 = -0.6058818238834054e+01;
};

class Stepper {
 public:
  Stepper(const BandedSystem& sys, IntegrationStats& stats)
      : sys_(sys), stats_(stats), n_(std::size_t(sys.n)), jac_(sys.n, sys.kl, sys.ku) {
    for (auto* v : {&f0_, &dfdt_, &fp_, &fm_, &tmp_, &fnew_, &g1_, &g2_, &g3_, &g4_, &g5_}) v->assign(n_, 0.0);
  }

  void eval(double t, const std::vector<double>& y, std::vector<double>& f) {
    ++stats_.rhs_evals;
    sys_.rhs(t, y, f);
  }

  // Returns false when the shifted Jacobian is singular.
  bool step(const std::vector<double>& x, double t, double dt, std::vector<double>& xout, std::vector<double>& xerr) {
    using K = Coefficients;
    eval(t, x, f0_);
    const double h = 1e-6 * std::max(1.0, std::fabs(t)) + 1e-6 * dt;
    eval(t + h, x, fp_);
    eval(t - h, x, fm_);
    for (std::size_t i = 0; i < n_; ++i) dfdt_[i] = (fp_[i] - fm_[i]) / (2 * h);

    jac_.zero();
    ++stats_.jacobian_evals;
    sys_.jacobian(t, x, jac_);
    jac_.scale_shift(-1.0, 1.0 / (K::gamma * dt));
    if (!jac_.factorize()) return false;

    for (std::size_t i = 0; i < n_; ++i) g1_[i] = f0_[i] + dt * K::d1 * dfdt_[i];
    jac_.solve(g1_);

    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = x[i] + K::a21 * g1_[i];
    eval(t + K::c2 * dt, tmp_, fnew_);
    for (std::size_t i = 0; i < n_; ++i) g2_[i] = fnew_[i] + dt * K::d2 * dfdt_[i] + K::c21 * g1_[i] / dt;
    jac_.solve(g2_);

    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = x[i] + K::a31 * g1_[i] + K::a32 * g2_[i];
    eval(t + K::c3 * dt, tmp_, fnew_);
    for (std::size_t i = 0; i < n_; ++i)
      g3_[i] = fnew_[i] + dt * K::d3 * dfdt_[i] + (K::c31 * g1_[i] + K::c32 * g2_[i]) / dt;
    jac_.solve(g3_);

    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = x[i] + K::a41 * g1_[i] + K::a42 * g2_[i] + K::a43 * g3_[i];
    eval(t + K::c4 * dt, tmp_, fnew_);
    for (std::size_t i = 0; i < n_; ++i)
      g4_[i] = fnew_[i] + dt * K::d4 * dfdt_[i] + (K::c41 * g1_[i] + K::c42 * g2_[i] + K::c43 * g3_[i]) / dt;
    jac_.solve(g4_);

    for (std::size_t i = 0; i < n_; ++i)
      tmp_[i] = x[i] + K::a51 * g1_[i] + K::a52 * g2_[i] + K::a53 * g3_[i] + K::a54 * g4_[i];
    eval(t + dt, tmp_, fnew_);
    for (std::size_t i = 0; i < n_; ++i)
      g5_[i] = fnew_[i] + (K::c51 * g1_[i] + K::c52 * g2_[i] + K::c53 * g3_[i] + K::c54 * g4_[i]) / dt;
    jac_.solve(g5_);

    for (std::size_t i = 0; i < n_; ++i) tmp_[i] += g5_[i];
    eval(t + dt, tmp_, fnew_);
    for (std::size_t i = 0; i < n_; ++i)
      xerr[i] = fnew_[i] + (K::c61 * g1_[i] + K::c62 * g2_[i] + K::c63 * g3_[i] + K::c64 * g4_[i] +
                            K::c65 * g5_[i]) / dt;
    jac_.solve(xerr);
    for (std::size_t i = 0; i < n_; ++i) xout[i] = tmp_[i] + xerr[i];
    return true;
  }

 private:
  const BandedSystem& sys_;
  IntegrationStats& stats_;
  std::size_t n_;
  BandMatrix jac_;
  std::vector<double> f0_, dfdt_, fp_, fm_, tmp_, fnew_, g1_, g2_, g3_, g4_, g5_;
};

double error_norm(const std::vector<double>& xnew, const std::vector<double>& xold, const std::vector<double>& xerr,
                  const IntegratorOptions& o) {
  double err = 0.0;
  for (std::size_t i = 0; i < xnew.size(); ++i) {
    double sk = o.atol + o.rtol * std::max(std::fabs(xold[i]), std::fabs(xnew[i]));
    err += xerr[i] * xerr[i] / (sk * sk);
  }
  err = xnew.empty() ? 0.0 : std::sqrt(err / double(xnew.size()));
  return std::isfinite(err) ? err : 1e300;
}

double norm_inf(const std::vector<double>& y) {
  double m = 0.0;
  for (double v : y) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace

IntegrationStats integrate_rosenbrock(const BandedSystem& sys, std::vector<double>& y, double t0,
                                      const std::vector<double>& outputs, const IntegratorOptions& opts,
                                      const std::function<void(double, const std::vector<double>&)>& on_output) {
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) throw ValidationError("integrator: rtol and atol must be positive");
  if (y.size() != std::size_t(sys.n)) throw StructuralError("integrator: state has wrong length");
  if (!std::is_sorted(outputs.begin(), outputs.end())) throw ValidationError("integrator: output times unsorted");

  IntegrationStats stats;
  Stepper stepper(sys, stats);
  constexpr double safe = 0.9, fac1 = 5.0, fac2 = 1.0 / 6.0;
  bool first = true, last_rejected = false;
  double err_old = 0.0, dt_old = 0.0;
  double t = t0, dt = opts.initial_step;
  std::vector<double> xnew(y.size()), xerr(y.size());
  std::string last_failure;

  for (double target : outputs) {
    if (target < t0) throw ValidationError("integrator: output time before the start");
    while (t < target) {
      if (stats.accepted + stats.rejected >= opts.max_steps)
        throw NumericalError(fmt::format("integrator: step limit {} reached at t = {:.6g}", opts.max_steps, t));
      const double remaining = target - t;
      // Land exactly on the output, avoiding a sliver step just before it.
      const bool hits = dt >= remaining || dt > 0.99 * remaining;
      const double h = hits ? remaining : dt;
      if (h < opts.min_step * std::max(1.0, std::fabs(t)) && !hits)
        throw NumericalError(fmt::format("integrator: step size collapsed to {:.3g} at t = {:.9g}, |y|inf = {:.6g}{}",
                                         h, t, norm_inf(y), last_failure.empty() ? "" : "; last stage failure: " +
                                                                                         last_failure));
      double err;
      try {
        err = stepper.step(y, t, h, xnew, xerr) ? error_norm(xnew, y, xerr, opts) : 1e300;
      } catch (const StageFailure& e) {
        ++stats.stage_failures;
        last_failure = e.what();
        err = 1e300;
      }
      const double t_new = hits ? target : t + h;
      if (err <= 1.0 && sys.accepted) {
        // The closure may veto a state the stages never visited.
        try {
          sys.accepted(t_new, xnew);
        } catch (const StageFailure& e) {
          ++stats.stage_failures;
          last_failure = e.what();
          err = 1e300;
        }
      }
      double fac = std::clamp(std::pow(err, 0.25) / safe, fac2, fac1);
      double dt_new = h / fac;
      if (err <= 1.0) {
        if (first) {
          first = false;
        } else {
          double pred = std::clamp((dt_old / h) * std::pow(err * err / err_old, 0.25) / safe, fac2, fac1);
          fac = std::max(fac, pred);
          dt_new = h / fac;
        }
        dt_old = h;
        err_old = std::max(0.01, err);
        if (last_rejected) dt_new = std::min(dt_new, h);
        last_rejected = false;
        t = t_new;
        y.swap(xnew);
        ++stats.accepted;
        // A clamped final step must not shrink the controller's proposal.
        dt = hits ? std::max(dt_new, std::min(dt, dt_new * fac1)) : dt_new;
      } else {
        ++stats.rejected;
        last_rejected = true;
        dt = dt_new;
        if (dt < opts.min_step * std::max(1.0, std::fabs(t)))
          throw NumericalError(fmt::format("integrator: step size collapsed to {:.3g} at t = {:.9g}, |y|inf = {:.6g}{}",
                                           dt, t, norm_inf(y),
                                           last_failure.empty() ? "" : "; last stage failure: " + last_failure));
      }
    }
    if (on_output) on_output(t, y);
  }
  return stats;
}

}  // namespace msbc
