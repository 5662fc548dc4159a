#include "mprb/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "mprb/errors.hpp"

namespace mprb {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

void settle(AuditRecord& r) {
  r.status = r.worst_margin >= -r.tolerance ? AuditStatus::pass : AuditStatus::fail;
}

double sq(double x) { return x * x; }

}  // namespace

const char* to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::pass: return "pass";
    case AuditStatus::fail: return "fail";
    case AuditStatus::not_applicable: return "n/a";
  }
  return "?";
}

void AuditConfig::validate() const {
  if (!(c1 > 0)) throw ConfigError("audit c1 must be positive");
  for (double t : {tol_max_principle, tol_theta, tol_energy, tol_mean_enstrophy, tol_ball})
    if (!(t > 0)) throw ConfigError("audit tolerances must be positive");
}

bool AuditReport::all_applicable_pass() const {
  return std::all_of(records.begin(), records.end(),
                     [](const AuditRecord& r) { return r.status != AuditStatus::fail; });
}

const AuditRecord* AuditReport::find(const std::string& name) const {
  for (const auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

double time_T1(double theta0_l2, double A) { return std::log1p(theta0_l2 / std::sqrt(A)) / kPi2; }

double ball_radius(const DimensionlessParams& dp) {
  return 4.0 * std::numbers::pi / std::sqrt(6.0) * dp.A * dp.D * dp.Ra * dp.Ra;
}

double radius_polynomial(double V, const DimensionlessParams& dp, double c1) {
  const double e = dp.eps;
  return 32.0 * dp.Ra * dp.Ra * dp.A + 2.0 * std::pow(c1, 4) * std::pow(e, 4) * std::pow(dp.D, 3) * V * V * V -
         (kPi2 / dp.D) * V;
}

double energy_bound(double t, double E0, double theta0_l2, const DimensionlessParams& dp) {
  const double De = dp.D * dp.eps;
  const double Ra2 = dp.Ra * dp.Ra;
  const double th = sq(theta0_l2 + std::sqrt(dp.A));
  if (De == 1.0) return (E0 + 16.0 * Ra2 * th / dp.eps) * std::exp(-kPi2 * t) + 8.0 * dp.A * dp.D * Ra2;
  return E0 * std::exp(-2.0 * kPi2 / De * t) +
         8.0 * dp.D * Ra2 * th / std::abs(De - 1.0) * std::exp(-2.0 * kPi2 * std::min(1.0, 1.0 / De) * t) +
         8.0 * dp.A * dp.D * Ra2;
}

double theta_bound(double t, double theta0_l2, double A) {
  return 2.0 * std::sqrt(A) + 2.0 * (theta0_l2 + std::sqrt(A)) * std::exp(-kPi2 * t);
}

AuditRecord max_principle_audit(const Trajectory& traj, double rel_tol, double T0) {
  AuditRecord r;
  r.name = "max_principle";
  if (traj.records.empty()) {
    r.status = AuditStatus::not_applicable;
    r.detail = "empty trajectory";
    return r;
  }
  const auto& first = traj.records.front();
  const double P0 = first.norms.pos_part, N0 = first.norms.neg_part;
  const double t0 = first.t;
  r.tolerance = rel_tol * std::max(P0 + N0, std::sqrt(traj.params.A));
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& rec : traj.records) {
    if (rec.t < T0) continue;
    const double decay = std::exp(-kPi2 * (rec.t - t0));
    for (double m : {P0 * decay - rec.norms.pos_part, N0 * decay - rec.norms.neg_part}) {
      if (m < r.worst_margin) {
        r.worst_margin = m;
        r.t_worst = rec.t;
      }
    }
  }
  r.detail = fmt("|(T-1)+(0)| = %.6g, |T-(0)| = %.6g", P0, N0);
  settle(r);
  return r;
}

AuditRecord theta_bound_audit(const Trajectory& traj, double rel_tol, double T0) {
  AuditRecord r;
  r.name = "theta_bound";
  if (traj.records.empty()) {
    r.status = AuditStatus::not_applicable;
    return r;
  }
  const double A = traj.params.A;
  const double th0 = traj.records.front().norms.l2_theta;
  const double t0 = traj.records.front().t;
  r.tolerance = rel_tol * theta_bound(0.0, th0, A);
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& rec : traj.records) {
    if (rec.t < T0) continue;
    const double m = theta_bound(rec.t - t0, th0, A) - rec.norms.l2_theta;
    if (m < r.worst_margin) r.worst_margin = m, r.t_worst = rec.t;
  }
  r.detail = fmt("|theta0| = %.6g, asymptotic bound 2 sqrt(A) = %.6g", th0, 2.0 * std::sqrt(A));
  settle(r);
  return r;
}

AuditRecord energy_bound_audit(const Trajectory& traj, const DimensionlessParams& dp, double rel_tol, double T0) {
  AuditRecord r;
  r.name = "energy_bound";
  if (traj.records.empty()) {
    r.status = AuditStatus::not_applicable;
    return r;
  }
  const auto& first = traj.records.front();
  const double E0 = sq(first.norms.l2_u) + dp.M * sq(first.norms.l2_gamma);
  const double th0 = first.norms.l2_theta;
  r.tolerance = rel_tol * energy_bound(0.0, E0, th0, dp);
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& rec : traj.records) {
    if (rec.t < T0) continue;
    const double E = sq(rec.norms.l2_u) + dp.M * sq(rec.norms.l2_gamma);
    const double m = energy_bound(rec.t - first.t, E0, th0, dp) - E;
    if (m < r.worst_margin) r.worst_margin = m, r.t_worst = rec.t;
  }
  const double De = dp.D * dp.eps;
  r.detail = std::string(De == 1.0 ? "branch D eps = 1" : (De < 1.0 ? "branch D eps < 1" : "branch D eps > 1")) +
             fmt(", D eps = %.6g, E0 = %.6g", De, E0);
  settle(r);
  return r;
}

AuditRecord mean_enstrophy_audit(const Trajectory& traj, const DimensionlessParams& dp, double rel_tol) {
  AuditRecord r;
  r.name = "mean_enstrophy";
  if (traj.records.size() < 2) {
    r.status = AuditStatus::not_applicable;
    r.detail = "needs at least two records";
    return r;
  }
  const double t0 = traj.records.front().t;
  const double T1 = t0 + time_T1(traj.records.front().norms.l2_theta, dp.A);
  std::size_t a = 0;
  while (a < traj.records.size() && traj.records[a].t < T1) ++a;
  if (a + 1 >= traj.records.size()) {
    r.status = AuditStatus::not_applicable;
    r.detail = fmt("trajectory ends before T1 = %.6g", T1);
    return r;
  }
  const auto& ra = traj.records[a];
  const double Ea = sq(ra.norms.l2_u) + dp.M * sq(ra.norms.l2_gamma);
  const double floor_term = 8.0 * dp.A * dp.Ra * dp.Ra / (dp.D * kPi2);
  r.tolerance = rel_tol * std::max(floor_term, dp.eps * Ea / (2.0 * dp.D * (traj.records.back().t - ra.t)));
  r.worst_margin = std::numeric_limits<double>::infinity();
  double integral = 0;
  for (std::size_t i = a + 1; i < traj.records.size(); ++i) {
    const auto& p = traj.records[i - 1];
    const auto& c = traj.records[i];
    integral += 0.5 * (c.t - p.t) * (p.norms.V + c.norms.V);
    const double span = c.t - ra.t;
    const double bound = dp.eps / (2.0 * dp.D * span) * Ea + floor_term;
    const double m = bound - integral / span;
    if (m < r.worst_margin) r.worst_margin = m, r.t_worst = c.t;
  }
  r.detail = fmt("T1 = %.6g, window start %.6g", T1, ra.t);
  settle(r);
  return r;
}

AuditRecord enstrophy_ball_audit(const Trajectory& traj, const DimensionlessParams& dp, double c1, double rel_tol,
                                 double* t_star) {
  AuditRecord r;
  r.name = "enstrophy_ball";
  if (t_star) *t_star = -1;
  const HReport h = check_condition_H(dp, c1);
  if (!h.satisfied) {
    r.status = AuditStatus::not_applicable;
    r.detail = fmt("condition (H) fails: margin_L = %.6g, margin_Pr = %.6g", h.margin_L, h.margin_Pr);
    return r;
  }
  if (traj.records.empty()) {
    r.status = AuditStatus::not_applicable;
    return r;
  }
  const double R = ball_radius(dp);
  const double pR = radius_polynomial(R, dp, c1);
  const double t0 = traj.records.front().t;
  const double T1 = t0 + time_T1(traj.records.front().norms.l2_theta, dp.A);
  r.tolerance = rel_tol * R;

  std::size_t first = traj.records.size();
  for (std::size_t i = 0; i < traj.records.size(); ++i)
    if (traj.records[i].t >= T1 && traj.records[i].norms.V <= R) {
      first = i;
      break;
    }
  if (first == traj.records.size()) {
    r.status = AuditStatus::fail;
    r.worst_margin = R - traj.records.back().norms.V;
    r.t_worst = traj.records.back().t;
    r.detail = fmt("V never entered the ball after T1 = %.6g (R = %.6g)", T1, R);
    return r;
  }
  if (t_star) *t_star = traj.records[first].t;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = first; i < traj.records.size(); ++i) {
    const double m = R - traj.records[i].norms.V;
    if (m < r.worst_margin) r.worst_margin = m, r.t_worst = traj.records[i].t;
  }
  r.detail = fmt("R = %.6g, t* = %.6g, p(R) = %.6g", R, traj.records[first].t, pR);
  settle(r);
  if (pR > 0) {
    r.status = AuditStatus::fail;
    r.detail += " (radius polynomial positive at R)";
  }
  return r;
}

AuditRecord grad_theta_audit(const Trajectory& traj, const DimensionlessParams& dp, double* implied_c4) {
  AuditRecord r;
  r.name = "grad_theta";
  if (implied_c4) *implied_c4 = 0;
  if (traj.records.empty()) {
    r.status = AuditStatus::not_applicable;
    return r;
  }
  const double t_mid = 0.5 * (traj.records.front().t + traj.records.back().t);
  double sup = 0, t_sup = traj.records.back().t;
  for (const auto& rec : traj.records) {
    if (rec.t < t_mid) continue;
    const double g = sq(rec.norms.h1_theta);
    if (g > sup) sup = g, t_sup = rec.t;
  }
  const double scale = dp.A * std::pow(dp.D, 1.5) * (1.0 + dp.A) * (1.0 + std::pow(dp.Ra, 3));
  const double c4 = sup / scale;
  if (implied_c4) *implied_c4 = c4;
  r.worst_margin = std::isfinite(c4) ? 0.0 : -std::numeric_limits<double>::infinity();
  r.t_worst = t_sup;
  r.tolerance = 0;
  r.detail = fmt("sup |grad theta|^2 = %.6g over trailing half, implied c4 = %.6g", sup, c4);
  settle(r);
  return r;
}

AuditReport run_audits(const Trajectory& traj, const DimensionlessParams& dp, const AuditConfig& cfg) {
  cfg.validate();
  AuditReport rep;
  rep.c1 = cfg.c1;
  rep.D = dp.D;
  rep.R = ball_radius(dp);
  if (!traj.records.empty()) rep.T1 = time_T1(traj.records.front().norms.l2_theta, dp.A);
  rep.records.push_back(max_principle_audit(traj, cfg.tol_max_principle, cfg.T0));
  rep.records.push_back(theta_bound_audit(traj, cfg.tol_theta, cfg.T0));
  rep.records.push_back(energy_bound_audit(traj, dp, cfg.tol_energy, cfg.T0));
  rep.records.push_back(mean_enstrophy_audit(traj, dp, cfg.tol_mean_enstrophy));
  rep.records.push_back(enstrophy_ball_audit(traj, dp, cfg.c1, cfg.tol_ball, &rep.t_star));
  rep.records.push_back(grad_theta_audit(traj, dp, &rep.implied_c4));
  return rep;
}

double agmon_ratio(const Space& sp, const Field& u) {
  const double g = h1_seminorm(sp, u);
  const double l = h2_operator_norm(sp, u);
  if (g == 0 || l == 0) return 0;
  const GridField v = synthesize(sp, u);
  double vmax = 0;
  for (int q = 0; q < v.nq; ++q)
    for (std::size_t i = 0; i < v.slab(); ++i) {
      double s = 0;
      for (int c = 0; c < v.comps; ++c) s += sq(v.level(c, q)[i]);
      vmax = std::max(vmax, s);
    }
  return std::sqrt(vmax) / std::sqrt(g * l);
}

double calibrate_agmon_c1(const Space& sp, int samples, std::uint64_t seed) {
  const auto& b = sp.basis(OperatorKind::stokes);
  Field f = zero_field(sp, OperatorKind::stokes);
  f.c[0] = 1.0;
  double best = agmon_ratio(sp, f);

  auto ascend = [&](Field start) {
    double cur = agmon_ratio(sp, start);
    const std::size_t n = std::min<std::size_t>(b.size(), 24);
    double step = 0.5;
    for (int sweep = 0; sweep < 6; ++sweep, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) {
        for (double sgn : {1.0, -1.0}) {
          Field trial = start;
          trial.c[i] += sgn * step;
          const double r = agmon_ratio(sp, trial);
          if (r > cur) {
            cur = r;
            start = std::move(trial);
          }
        }
      }
    }
    return cur;
  };
  best = std::max(best, ascend(f));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Field g = zero_field(sp, OperatorKind::stokes);
    for (std::size_t i = 0; i < g.c.size(); ++i) g.c[i] = U(rng) * kPi2 / b.eigenvalues[i];
    best = std::max(best, agmon_ratio(sp, g));
    if (s == 0) best = std::max(best, ascend(g));
  }
  return best;
}

LogLinearFit fit_log_linear(const std::vector<double>& t, const std::vector<double>& y, double t0, double t1) {
  LogLinearFit fit;
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < t.size() && i < y.size(); ++i) {
    if (t[i] < t0 || t[i] > t1 || !(y[i] > 0)) continue;
    const double ly = std::log(y[i]);
    pts.emplace_back(t[i], ly);
    st += t[i];
    sy += ly;
    stt += t[i] * t[i];
    sty += t[i] * ly;
  }
  fit.points = static_cast<int>(pts.size());
  if (pts.size() < 2) return fit;
  const double n = static_cast<double>(pts.size());
  const double den = n * stt - st * st;
  fit.slope = (n * sty - st * sy) / den;
  fit.intercept = (sy - fit.slope * st) / n;
  double ss = 0;
  for (const auto& [ti, li] : pts) ss += sq(li - (fit.intercept + fit.slope * ti));
  fit.rms = std::sqrt(ss / n);
  return fit;
}

}  // namespace mprb
