#include "mprb/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mprb/errors.hpp"
#include "mprb/parallel.hpp"

namespace mprb {

namespace {

constexpr OperatorKind kS = OperatorKind::stokes;
constexpr OperatorKind kV = OperatorKind::vector_laplacian;
constexpr OperatorKind kT = OperatorKind::scalar_laplacian;

void derivative_columns(const Space& sp, const Columns& v, const Columns& dz, Columns& out, int first) {
  const auto& d = sp.domain();
  const int width = 2 * d.Nh + 1;
  for (int i = 0; i < v.comps; ++i) {
    for (int q = 0; q < v.nq; ++q) {
      const cplx* src = v.row(i, q);
      cplx* ox = out.row(first + 3 * i, q);
      cplx* oy = out.row(first + 3 * i + 1, q);
      for (int p = 0; p < v.npos; ++p) {
        const int m = p / width, n = p % width - d.Nh;
        const double kx = 2.0 * std::numbers::pi * m / d.ax;
        const double ky = 2.0 * std::numbers::pi * n / d.ay;
        ox[p] = cplx(-kx * src[p].imag(), kx * src[p].real());
        oy[p] = cplx(-ky * src[p].imag(), ky * src[p].real());
      }
      std::copy_n(dz.row(i, q), v.npos, out.row(first + 3 * i + 2, q));
    }
  }
}

void copy_value_columns(const Columns& v, Columns& out, int first) {
  for (int i = 0; i < v.comps; ++i)
    for (int q = 0; q < v.nq; ++q) std::copy_n(v.row(i, q), v.npos, out.row(first + i, q));
}

Columns slice(const Columns& in, int first, int count) {
  Columns out;
  out.resize(count, in.nq, in.npos);
  for (int c = 0; c < count; ++c)
    for (int q = 0; q < in.nq; ++q) std::copy_n(in.row(first + c, q), in.npos, out.row(c, q));
  return out;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

const char* to_string(ModelKind m) { return m == ModelKind::micropolar ? "micropolar" : "newtonian"; }

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::imex_euler: return "imex-euler";
    case Scheme::imex_cnab2: return "imex-cnab2";
    case Scheme::oracle_rk78: return "oracle-rk78";
  }
  return "?";
}

ModelKind parse_model(const std::string& s) {
  if (s == "micropolar") return ModelKind::micropolar;
  if (s == "newtonian") return ModelKind::newtonian;
  throw ConfigError("unknown model '" + s + "' (expected micropolar or newtonian)");
}

Scheme parse_scheme(const std::string& s) {
  if (s == "imex-euler" || s == "euler") return Scheme::imex_euler;
  if (s == "imex-cnab2" || s == "cnab2") return Scheme::imex_cnab2;
  throw ConfigError("unknown scheme '" + s + "' (expected euler or cnab2)");
}

int formal_order(Scheme s) {
  switch (s) {
    case Scheme::imex_euler: return 1;
    case Scheme::imex_cnab2: return 2;
    case Scheme::oracle_rk78: return 7;
  }
  return 0;
}

GalerkinSystem::GalerkinSystem(SpacePtr space, const DimensionlessParams& dp, ModelKind model)
    : space_(std::move(space)), dp_(dp), model_(model), K_(model == ModelKind::newtonian ? 0.0 : dp.K) {
  if (!space_) throw ConfigError("GalerkinSystem needs a space");
  if (std::abs(dp.A - space_->area()) > 1e-12 * dp.A)
    throw ConfigError("parameter aspect ratios do not match the basis domain");
  if (model == ModelKind::newtonian) dp_ = dp.with_K(0.0);
}

std::size_t GalerkinSystem::dimension() const {
  return space_->basis(kS).size() + space_->basis(kV).size() + space_->basis(kT).size();
}

Tendency GalerkinSystem::explicit_terms(const State& s) const {
  const Space& sp = *space_;
  check_state(sp, s);
  if (!all_finite(s.u.c) || !all_finite(s.gamma.c) || !all_finite(s.theta.c))
    throw NumericalError("non-finite coefficients in state", s.t);

  Tendency out;
  out.u.assign(s.u.c.size(), 0.0);
  out.gamma.assign(s.gamma.c.size(), 0.0);
  out.theta.assign(s.theta.c.size(), 0.0);

  const bool moving = std::any_of(s.u.c.begin(), s.u.c.end(), [](double x) { return x != 0.0; });
  if (moving) {
    Columns uv, ud, gv, gd, tv, td;
    sp.synth_columns(kS, s.u.c, 0, uv);
    sp.synth_columns(kS, s.u.c, 1, ud);
    sp.synth_columns(kV, s.gamma.c, 0, gv);
    sp.synth_columns(kV, s.gamma.c, 1, gd);
    sp.synth_columns(kT, s.theta.c, 0, tv);
    sp.synth_columns(kT, s.theta.c, 1, td);

    // [0,3) u, [3,12) grad u, [12,21) grad gamma, [21,24) grad theta
    Columns all;
    all.resize(24, uv.nq, uv.npos);
    copy_value_columns(uv, all, 0);
    derivative_columns(sp, uv, ud, all, 3);
    derivative_columns(sp, gv, gd, all, 12);
    derivative_columns(sp, tv, td, all, 21);

    GridField g;
    sp.columns_to_grid(all, g);

    GridField adv;
    adv.resize(7, g.nq, g.nx, g.ny);
    const std::size_t slab = g.slab();
#pragma omp parallel for schedule(static)
    for (int q = 0; q < g.nq; ++q) {
      const double* u[3] = {g.level(0, q), g.level(1, q), g.level(2, q)};
      for (std::size_t i = 0; i < slab; ++i) {
        for (int c = 0; c < 3; ++c) {
          double au = 0, ag = 0;
          for (int j = 0; j < 3; ++j) {
            au += u[j][i] * g.level(3 + 3 * c + j, q)[i];
            ag += u[j][i] * g.level(12 + 3 * c + j, q)[i];
          }
          adv.level(c, q)[i] = au;
          adv.level(3 + c, q)[i] = ag;
        }
        double at = 0;
        for (int j = 0; j < 3; ++j) at += u[j][i] * g.level(21 + j, q)[i];
        adv.level(6, q)[i] = at;
      }
    }

    Columns ac;
    sp.grid_to_columns(adv, ac);
    sp.project_columns(kS, slice(ac, 0, 3), out.u);
    sp.project_columns(kV, slice(ac, 3, 3), out.gamma);
    sp.project_columns(kT, slice(ac, 6, 1), out.theta);

    const double eu = dp_.eps, eg = dp_.eps * dp_.M;
    for (auto& x : out.u) x *= -eu;
    for (auto& x : out.gamma) x *= -eg;
    for (auto& x : out.theta) x = -x;
  }

  // Buoyancy Ra theta e3 and the temperature source u3.
  const auto& cp = sp.coupling();
  for (int b = 0; b < sp.blocks(); ++b) {
    if (cp[b].Btheta.size() == 0) continue;
    const Eigen::VectorXcd zu = sp.gather(kS, b, s.u.c);
    const Eigen::VectorXcd zt = sp.gather(kT, b, s.theta.c);
    Eigen::VectorXcd nu = sp.gather(kS, b, out.u);
    Eigen::VectorXcd nt = sp.gather(kT, b, out.theta);
    nu += dp_.Ra * (cp[b].Btheta * zt);
    nt += cp[b].Btheta.adjoint() * zu;
    sp.scatter(kS, b, nu, out.u);
    sp.scatter(kT, b, nt, out.theta);
  }
  return out;
}

Tendency GalerkinSystem::linear_terms(const State& s) const {
  const Space& sp = *space_;
  check_state(sp, s);
  Tendency out;
  out.u.assign(s.u.c.size(), 0.0);
  out.gamma.assign(s.gamma.c.size(), 0.0);
  out.theta.assign(s.theta.c.size(), 0.0);
  const auto& lamS = sp.basis(kS).eigenvalues;
  const auto& lamV = sp.basis(kV).eigenvalues;
  const auto& lamT = sp.basis(kT).eigenvalues;
  for (std::size_t i = 0; i < out.u.size(); ++i) out.u[i] = (1.0 + K_) * lamS[i] * s.u.c[i];
  for (std::size_t i = 0; i < out.gamma.size(); ++i)
    out.gamma[i] = (dp_.L * lamV[i] + 4.0 * K_) * s.gamma.c[i];
  for (std::size_t i = 0; i < out.theta.size(); ++i) out.theta[i] = lamT[i] * s.theta.c[i];

  const auto& cp = sp.coupling();
  for (int b = 0; b < sp.blocks(); ++b) {
    const Eigen::VectorXcd zg = sp.gather(kV, b, s.gamma.c);
    Eigen::VectorXcd lg = sp.gather(kV, b, out.gamma);
    if (dp_.G != 0.0) lg += dp_.G * (cp[b].Gdiv * zg);
    if (K_ != 0.0) {
      const Eigen::VectorXcd zu = sp.gather(kS, b, s.u.c);
      Eigen::VectorXcd lu = sp.gather(kS, b, out.u);
      lu -= 2.0 * K_ * (cp[b].R * zg);
      lg -= 2.0 * K_ * (cp[b].R.adjoint() * zu);
      sp.scatter(kS, b, lu, out.u);
    }
    sp.scatter(kV, b, lg, out.gamma);
  }
  return out;
}

Tendency GalerkinSystem::rhs(const State& s) const {
  Tendency n = explicit_terms(s);
  const Tendency l = linear_terms(s);
  const double mu = 1.0 / dp_.eps, mg = 1.0 / (dp_.eps * dp_.M);
  for (std::size_t i = 0; i < n.u.size(); ++i) n.u[i] = (n.u[i] - l.u[i]) * mu;
  for (std::size_t i = 0; i < n.gamma.size(); ++i) n.gamma[i] = (n.gamma[i] - l.gamma[i]) * mg;
  for (std::size_t i = 0; i < n.theta.size(); ++i) n.theta[i] = n.theta[i] - l.theta[i];
  return n;
}

EnergyTerms GalerkinSystem::energy_terms(const State& s) const {
  const Space& sp = *space_;
  check_state(sp, s);
  EnergyTerms e;
  const double hu = h1_seminorm(sp, s.u), hg = h1_seminorm(sp, s.gamma), ht = h1_seminorm(sp, s.theta);
  const double lg = l2_norm(s.gamma);
  e.grad_u2 = hu * hu;
  e.grad_gamma2 = hg * hg;
  e.grad_theta2 = ht * ht;
  e.gamma2 = lg * lg;

  const auto& cp = sp.coupling();
  std::vector<double> rot(sp.blocks()), buo(sp.blocks()), div(sp.blocks());
  for (int b = 0; b < sp.blocks(); ++b) {
    const Eigen::VectorXcd zu = sp.gather(kS, b, s.u.c);
    const Eigen::VectorXcd zg = sp.gather(kV, b, s.gamma.c);
    const Eigen::VectorXcd zt = sp.gather(kT, b, s.theta.c);
    rot[b] = zu.size() && zg.size() ? zu.dot(cp[b].R * zg).real() : 0.0;
    buo[b] = zu.size() && zt.size() ? zu.dot(cp[b].Btheta * zt).real() : 0.0;
    div[b] = zg.size() ? zg.dot(cp[b].Gdiv * zg).real() : 0.0;
  }
  e.rot_gamma_u = pairwise_sum(rot);
  e.theta_u3 = pairwise_sum(buo);
  e.div_gamma2 = pairwise_sum(div);
  return e;
}

double GalerkinSystem::cfl_dt(const State& s, double safety, double dt_max) const {
  const Space& sp = *space_;
  const GridField g = synthesize(sp, s.u);
  const auto& z = sp.quad().z;
  double dz = z.front();
  for (std::size_t i = 1; i < z.size(); ++i) dz = std::min(dz, z[i] - z[i - 1]);
  dz = std::min(dz, 1.0 - z.back());
  const double dx = sp.domain().ax / g.nx, dy = sp.domain().ay / g.ny;
  double rate = 0;
  for (int q = 0; q < g.nq; ++q)
    for (std::size_t i = 0; i < g.slab(); ++i)
      rate = std::max(rate, std::abs(g.level(0, q)[i]) / dx + std::abs(g.level(1, q)[i]) / dy +
                                std::abs(g.level(2, q)[i]) / dz);
  if (rate == 0) return dt_max;
  return std::min(dt_max, safety / rate);
}

void axpy(double a, const State& x, State& y) {
  for (std::size_t i = 0; i < y.u.c.size(); ++i) y.u.c[i] += a * x.u.c[i];
  for (std::size_t i = 0; i < y.gamma.c.size(); ++i) y.gamma.c[i] += a * x.gamma.c[i];
  for (std::size_t i = 0; i < y.theta.c.size(); ++i) y.theta.c[i] += a * x.theta.c[i];
}

double state_distance_l2(const State& a, const State& b) {
  std::vector<double> sq;
  sq.reserve(a.u.c.size() + a.gamma.c.size() + a.theta.c.size());
  for (std::size_t i = 0; i < a.u.c.size(); ++i) sq.push_back((a.u.c[i] - b.u.c[i]) * (a.u.c[i] - b.u.c[i]));
  for (std::size_t i = 0; i < a.gamma.c.size(); ++i)
    sq.push_back((a.gamma.c[i] - b.gamma.c[i]) * (a.gamma.c[i] - b.gamma.c[i]));
  for (std::size_t i = 0; i < a.theta.c.size(); ++i)
    sq.push_back((a.theta.c[i] - b.theta.c[i]) * (a.theta.c[i] - b.theta.c[i]));
  return std::sqrt(pairwise_sum(sq));
}

}  // namespace mprb
