#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "mprb/errors.hpp"
#include "mprb/galerkin.hpp"

namespace mprb {

namespace {

using Vec = std::vector<double>;

struct Layout {
  std::size_t nu, ng, nt;
  std::size_t size() const { return nu + ng + nt + 3; }
};

State unpack(const Vec& x, const Layout& L, double t) {
  State s;
  s.t = t;
  s.u.c.assign(x.begin(), x.begin() + L.nu);
  s.gamma.c.assign(x.begin() + L.nu, x.begin() + L.nu + L.ng);
  s.theta.c.assign(x.begin() + L.nu + L.ng, x.begin() + L.nu + L.ng + L.nt);
  return s;
}

}  // namespace

Trajectory oracle_integrate(const GalerkinSystem& sys, const State& s0, double horizon, double tolerance,
                            const OracleOptions& opt) {
  namespace ode = boost::numeric::odeint;
  if (!(horizon >= 0)) throw ConfigError("horizon must be nonnegative");
  if (!(tolerance > 0)) throw ConfigError("oracle tolerance must be positive");
  if (static_cast<double>(sys.dimension()) > opt.max_dimension)
    throw ConfigError("oracle integration is limited to " + std::to_string(static_cast<long>(opt.max_dimension)) +
                      " modes, system has " + std::to_string(sys.dimension()));
  check_state(sys.space(), s0);

  const auto& dp = sys.params();
  const double K = sys.K();
  const Layout L{s0.u.c.size(), s0.gamma.c.size(), s0.theta.c.size()};

  auto rhs = [&](const Vec& x, Vec& dxdt, double t) {
    const State s = unpack(x, L, t);
    const Tendency f = sys.rhs(s);
    const EnergyTerms e = sys.energy_terms(s);
    dxdt.resize(L.size());
    std::copy(f.u.begin(), f.u.end(), dxdt.begin());
    std::copy(f.gamma.begin(), f.gamma.end(), dxdt.begin() + L.nu);
    std::copy(f.theta.begin(), f.theta.end(), dxdt.begin() + L.nu + L.ng);
    const std::size_t o = L.nu + L.ng + L.nt;
    dxdt[o] = 2.0 * (1.0 + K) * e.grad_u2 - 4.0 * K * e.rot_gamma_u - 2.0 * dp.Ra * e.theta_u3;
    dxdt[o + 1] = 2.0 * dp.L * e.grad_gamma2 + 2.0 * dp.G * e.div_gamma2 + 8.0 * K * e.gamma2 - 4.0 * K * e.rot_gamma_u;
    dxdt[o + 2] = 2.0 * e.grad_theta2 - 2.0 * e.theta_u3;
  };

  Vec x(L.size(), 0.0);
  std::copy(s0.u.c.begin(), s0.u.c.end(), x.begin());
  std::copy(s0.gamma.c.begin(), s0.gamma.c.end(), x.begin() + L.nu);
  std::copy(s0.theta.c.begin(), s0.theta.c.end(), x.begin() + L.nu + L.ng);

  Trajectory traj;
  traj.scheme = Scheme::oracle_rk78;
  traj.model = sys.model();
  traj.params = sys.params();

  auto push = [&](const Vec& xs, double t) {
    const State s = unpack(xs, L, t);
    StepRecord r = make_record(sys, s);
    r.has_integrals = true;
    const std::size_t o = L.nu + L.ng + L.nt;
    r.integrals = {xs[o], xs[o + 1], xs[o + 2]};
    traj.records.push_back(r);
    if (opt.keep_samples) traj.samples.push_back(s);
  };

  const double t0 = s0.t, t_end = s0.t + horizon;
  push(x, t0);
  if (horizon == 0) {
    traj.samples = {s0};
    return traj;
  }

  auto stepper = ode::make_controlled(tolerance, tolerance, ode::runge_kutta_fehlberg78<Vec>());
  double t = t0;
  double h = std::min(1e-3, horizon / 16.0);
  std::size_t steps = 0;
  double h_sum = 0;
  while (t < t_end) {
    if (t + h > t_end) h = t_end - t;
    const double t_before = t;
    const auto res = stepper.try_step(rhs, x, t, h);
    if (res == ode::success) {
      if (!std::isfinite(x[0]) || !std::isfinite(x[L.size() - 1]))
        throw NumericalError("oracle produced non-finite values", t);
      h_sum += t - t_before;
      if (t_end - t < 1e-13 * std::max(1.0, std::abs(t_end))) t = t_end;
      push(x, t);
      if (++steps > opt.max_steps) throw StiffnessError("oracle exceeded its step budget", t);
    } else if (h < opt.min_step * std::max(1.0, horizon)) {
      throw StiffnessError("oracle step size underflow", t);
    }
  }
  traj.dt = steps ? h_sum / static_cast<double>(steps) : 0.0;
  if (!opt.keep_samples) traj.samples = {s0, unpack(x, L, t_end)};
  return traj;
}

}  // namespace mprb
