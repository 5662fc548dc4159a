#include <cmath>
#include <cstdio>

#include "mprb/errors.hpp"
#include "mprb/galerkin.hpp"

namespace mprb {

namespace {
constexpr OperatorKind kS = OperatorKind::stokes;
constexpr OperatorKind kV = OperatorKind::vector_laplacian;
constexpr OperatorKind kT = OperatorKind::scalar_laplacian;
}  // namespace

Stepper::Stepper(const GalerkinSystem& sys, double dt, Scheme scheme, double blowup_cap)
    : sys_(sys), dt_(dt), scheme_(scheme), cap_(blowup_cap) {
  if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
  if (scheme == Scheme::imex_euler)
    c_ = 1.0;
  else if (scheme == Scheme::imex_cnab2)
    c_ = 0.5;
  else
    throw ConfigError("Stepper supports only the IMEX schemes");

  const Space& sp = sys.space();
  const auto& dp = sys.params();
  const double K = sys.K();
  const double eu = dp.eps / dt, eg = dp.eps * dp.M / dt;
  const auto& cp = sp.coupling();
  solvers_.resize(sp.blocks());

  for (int b = 0; b < sp.blocks(); ++b) {
    const auto& ss = sp.basis(kS).blocks[b].slots;
    const auto& vs = sp.basis(kV).blocks[b].slots;
    const int ns = static_cast<int>(ss.size()), nv = static_cast<int>(vs.size());

    Eigen::MatrixXcd Auu = Eigen::MatrixXcd::Zero(ns, ns);
    for (int i = 0; i < ns; ++i) Auu(i, i) = eu + c_ * (1.0 + K) * ss[i].eigenvalue;
    Eigen::MatrixXcd Agg = c_ * dp.G * cp[b].Gdiv;
    for (int i = 0; i < nv; ++i) Agg(i, i) += eg + c_ * (dp.L * vs[i].eigenvalue + 4.0 * K);

    if (sys.model() == ModelKind::newtonian) {
      solvers_[b].ug.compute(Auu);
      solvers_[b].g.compute(Agg);
    } else {
      Eigen::MatrixXcd A(ns + nv, ns + nv);
      A.topLeftCorner(ns, ns) = Auu;
      A.bottomRightCorner(nv, nv) = Agg;
      A.topRightCorner(ns, nv) = -2.0 * c_ * K * cp[b].R;
      A.bottomLeftCorner(nv, ns) = -2.0 * c_ * K * cp[b].R.adjoint();
      solvers_[b].ug.compute(A);
    }
    if (solvers_[b].ug.info() != Eigen::Success ||
        (sys.model() == ModelKind::newtonian && solvers_[b].g.info() != Eigen::Success))
      throw NumericalError("implicit operator is not positive definite", 0.0);
  }
}

State Stepper::implicit_solve(const State& s, const Tendency& n_star) const {
  const Space& sp = sys_.space();
  const auto& dp = sys_.params();
  const Tendency lin = sys_.linear_terms(s);
  const double eu = dp.eps / dt_, eg = dp.eps * dp.M / dt_;
  const double expl = 1.0 - c_;

  // Right-hand sides Mass/dt y - (1-c) Lin y + N*, assembled in coefficient space.
  Tendency r;
  r.u.resize(s.u.c.size());
  r.gamma.resize(s.gamma.c.size());
  r.theta.resize(s.theta.c.size());
  for (std::size_t i = 0; i < r.u.size(); ++i) r.u[i] = eu * s.u.c[i] - expl * lin.u[i] + n_star.u[i];
  for (std::size_t i = 0; i < r.gamma.size(); ++i)
    r.gamma[i] = eg * s.gamma.c[i] - expl * lin.gamma[i] + n_star.gamma[i];
  for (std::size_t i = 0; i < r.theta.size(); ++i)
    r.theta[i] = s.theta.c[i] / dt_ - expl * lin.theta[i] + n_star.theta[i];

  State out;
  out.t = s.t + dt_;
  out.u.c.assign(s.u.c.size(), 0.0);
  out.gamma.c.assign(s.gamma.c.size(), 0.0);
  const auto& lamT = sp.basis(kT).eigenvalues;
  out.theta.c.resize(s.theta.c.size());
  for (std::size_t i = 0; i < r.theta.size(); ++i) out.theta.c[i] = r.theta[i] / (1.0 / dt_ + c_ * lamT[i]);

#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < sp.blocks(); ++b) {
    const Eigen::VectorXcd ru = sp.gather(kS, b, r.u);
    const Eigen::VectorXcd rg = sp.gather(kV, b, r.gamma);
    if (sys_.model() == ModelKind::newtonian) {
      if (ru.size()) sp.scatter(kS, b, solvers_[b].ug.solve(ru), out.u.c);
      if (rg.size()) sp.scatter(kV, b, solvers_[b].g.solve(rg), out.gamma.c);
    } else {
      const auto ns = ru.size(), nv = rg.size();
      if (ns + nv == 0) continue;
      Eigen::VectorXcd rhs(ns + nv);
      rhs << ru, rg;
      const Eigen::VectorXcd x = solvers_[b].ug.solve(rhs);
      sp.scatter(kS, b, x.head(ns), out.u.c);
      sp.scatter(kV, b, x.tail(nv), out.gamma.c);
    }
  }
  return out;
}

void Stepper::check_blowup(const State& s) const {
  const double nu = l2_norm(s.u), ng = l2_norm(s.gamma), nt = l2_norm(s.theta);
  if (!std::isfinite(nu) || !std::isfinite(ng) || !std::isfinite(nt))
    throw NumericalError("numerical blow-up: non-finite field norm", s.t);
  if (nu > cap_ || ng > cap_ || nt > cap_) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "numerical blow-up: |u| = %.6g, |gamma| = %.6g, |theta| = %.6g exceed %.3g", nu,
                  ng, nt, cap_);
    throw NumericalError(buf, s.t);
  }
}

State Stepper::step(const State& s) {
  State out;
  if (scheme_ == Scheme::imex_euler) {
    out = implicit_solve(s, sys_.explicit_terms(s));
  } else {
    Tendency n0 = sys_.explicit_terms(s);
    Tendency n_star = n0;
    if (!have_prev_) {
      // Heun start: predictor with N(y^n), corrector with the average.
      const State pred = implicit_solve(s, n0);
      const Tendency n1 = sys_.explicit_terms(pred);
      for (std::size_t i = 0; i < n_star.u.size(); ++i) n_star.u[i] = 0.5 * (n0.u[i] + n1.u[i]);
      for (std::size_t i = 0; i < n_star.gamma.size(); ++i) n_star.gamma[i] = 0.5 * (n0.gamma[i] + n1.gamma[i]);
      for (std::size_t i = 0; i < n_star.theta.size(); ++i) n_star.theta[i] = 0.5 * (n0.theta[i] + n1.theta[i]);
    } else {
      for (std::size_t i = 0; i < n_star.u.size(); ++i) n_star.u[i] = 1.5 * n0.u[i] - 0.5 * prev_.u[i];
      for (std::size_t i = 0; i < n_star.gamma.size(); ++i)
        n_star.gamma[i] = 1.5 * n0.gamma[i] - 0.5 * prev_.gamma[i];
      for (std::size_t i = 0; i < n_star.theta.size(); ++i)
        n_star.theta[i] = 1.5 * n0.theta[i] - 0.5 * prev_.theta[i];
    }
    out = implicit_solve(s, n_star);
    prev_ = std::move(n0);
    have_prev_ = true;
  }
  check_blowup(out);
  return out;
}

}  // namespace mprb
