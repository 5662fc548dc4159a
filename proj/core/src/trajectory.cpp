#include <cmath>

#include "mprb/errors.hpp"
#include "mprb/galerkin.hpp"

namespace mprb {

StepRecord make_record(const GalerkinSystem& sys, const State& s) {
  StepRecord r;
  r.t = s.t;
  r.norms = norms(sys.space(), s, sys.params());
  r.terms = sys.energy_terms(s);
  return r;
}

Trajectory integrate(const GalerkinSystem& sys, const State& s0, double horizon, double dt, Scheme scheme,
                     const IntegrateOptions& opt) {
  if (!(horizon >= 0) || !std::isfinite(horizon)) throw ConfigError("horizon must be nonnegative");
  if (!(dt > 0)) throw ConfigError("time step must be positive");
  if (opt.diag_every < 1) throw ConfigError("diagnostics cadence must be >= 1");
  check_state(sys.space(), s0);

  Trajectory traj;
  traj.scheme = scheme;
  traj.model = sys.model();
  traj.params = sys.params();

  const long long steps = horizon == 0 ? 0 : std::max(1LL, std::llround(horizon / dt));
  const double h = steps == 0 ? dt : horizon / static_cast<double>(steps);
  traj.dt = h;

  State s = s0;
  {
    const StepRecord r = make_record(sys, s);
    traj.records.push_back(r);
    if (opt.observer) opt.observer(s, r);
  }
  traj.samples.push_back(s);
  if (steps == 0) return traj;

  Stepper stepper(sys, h, scheme, opt.blowup_cap);
  for (long long n = 1; n <= steps; ++n) {
    s = stepper.step(s);
    s.t = s0.t + static_cast<double>(n) * h;
    const bool diag = n % opt.diag_every == 0 || n == steps;
    if (diag || opt.observer) {
      const StepRecord r = make_record(sys, s);
      if (diag) traj.records.push_back(r);
      if (opt.observer) opt.observer(s, r);
    }
    if ((opt.sample_every > 0 && n % opt.sample_every == 0) || n == steps) traj.samples.push_back(s);
  }
  return traj;
}

std::vector<EnergyResiduals> energy_residuals(const Trajectory& traj, const DimensionlessParams& dp) {
  std::vector<EnergyResiduals> out;
  const double K = dp.K;
  auto fu = [&](const EnergyTerms& e) {
    return 2.0 * (1.0 + K) * e.grad_u2 - 4.0 * K * e.rot_gamma_u - 2.0 * dp.Ra * e.theta_u3;
  };
  auto fg = [&](const EnergyTerms& e) {
    return 2.0 * dp.L * e.grad_gamma2 + 2.0 * dp.G * e.div_gamma2 + 8.0 * K * e.gamma2 - 4.0 * K * e.rot_gamma_u;
  };
  auto ft = [&](const EnergyTerms& e) { return 2.0 * e.grad_theta2 - 2.0 * e.theta_u3; };

  for (std::size_t i = 1; i < traj.records.size(); ++i) {
    const auto& a = traj.records[i - 1];
    const auto& b = traj.records[i];
    const double h = b.t - a.t;
    EnergyResiduals r;
    r.t0 = a.t;
    r.t1 = b.t;
    double iu, ig, it;
    if (a.has_integrals && b.has_integrals) {
      iu = b.integrals[0] - a.integrals[0];
      ig = b.integrals[1] - a.integrals[1];
      it = b.integrals[2] - a.integrals[2];
    } else {
      iu = 0.5 * h * (fu(a.terms) + fu(b.terms));
      ig = 0.5 * h * (fg(a.terms) + fg(b.terms));
      it = 0.5 * h * (ft(a.terms) + ft(b.terms));
    }
    const auto sq = [](double x) { return x * x; };
    r.r_u = dp.eps * (sq(b.norms.l2_u) - sq(a.norms.l2_u)) + iu;
    r.r_gamma = dp.eps * dp.M * (sq(b.norms.l2_gamma) - sq(a.norms.l2_gamma)) + ig;
    r.r_theta = (sq(b.norms.l2_theta) - sq(a.norms.l2_theta)) + it;
    out.push_back(r);
  }
  return out;
}

double max_residual_rate(const std::vector<EnergyResiduals>& r) {
  double m = 0;
  for (const auto& x : r) {
    const double h = x.t1 - x.t0;
    if (h > 0) m = std::max(m, (std::abs(x.r_u) + std::abs(x.r_gamma) + std::abs(x.r_theta)) / h);
  }
  return m;
}

}  // namespace mprb
