#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mprb/galerkin.hpp"

namespace mprb {

enum class AuditStatus { pass, fail, not_applicable };
const char* to_string(AuditStatus s);

// margin(t) = bound(t) - observed(t); pass iff worst_margin >= -tolerance.
// `tolerance` is absolute: the configured relative tolerance times the
// audit's bound scale.
struct AuditRecord {
  std::string name;
  double worst_margin = 0;
  double t_worst = 0;
  double tolerance = 0;
  AuditStatus status = AuditStatus::pass;
  std::string detail;
};

struct AuditConfig {
  double c1 = 0;                    // Agmon constant; must be set
  double tol_max_principle = 1e-6;  // relative to |(T-1)^+(0)| + |T^-(0)|, floor sqrt(A)
  double tol_theta = 1e-6;          // relative to the theta bound at t = 0
  double tol_energy = 1e-6;         // relative to the energy bound at t = 0
  double tol_mean_enstrophy = 1e-6; // relative to the mean-enstrophy bound
  double tol_ball = 1e-3;           // relative to R
  double T0 = 0;                    // audits ignore records with t < T0

  void validate() const;
};

struct AuditReport {
  std::vector<AuditRecord> records;
  double T1 = 0, R = 0, D = 0;
  double implied_c4 = 0;
  double t_star = -1;  // first t >= T1 with V <= R, or -1
  double c1 = 0;

  bool all_applicable_pass() const;
  const AuditRecord* find(const std::string& name) const;
};

double time_T1(double theta0_l2, double A);
double ball_radius(const DimensionlessParams& dp);
double radius_polynomial(double V, const DimensionlessParams& dp, double c1);

// Energy bound for |u|^2 + M |gamma|^2 at time t.
double energy_bound(double t, double E0, double theta0_l2, const DimensionlessParams& dp);
double theta_bound(double t, double theta0_l2, double A);

AuditRecord max_principle_audit(const Trajectory& traj, double rel_tol, double T0 = 0);
AuditRecord theta_bound_audit(const Trajectory& traj, double rel_tol, double T0 = 0);
AuditRecord energy_bound_audit(const Trajectory& traj, const DimensionlessParams& dp, double rel_tol,
                               double T0 = 0);
AuditRecord mean_enstrophy_audit(const Trajectory& traj, const DimensionlessParams& dp, double rel_tol);
AuditRecord enstrophy_ball_audit(const Trajectory& traj, const DimensionlessParams& dp, double c1, double rel_tol,
                                 double* t_star = nullptr);
AuditRecord grad_theta_audit(const Trajectory& traj, const DimensionlessParams& dp, double* implied_c4 = nullptr);

AuditReport run_audits(const Trajectory& traj, const DimensionlessParams& dp, const AuditConfig& cfg);

// |v|_inf / (|grad v|^{1/2} |Lambda_S v|^{1/2}) with the sup taken over the
// dealiased grid.
double agmon_ratio(const Space& sp, const Field& u);
// Largest ratio over the ground Stokes mode, `samples` random fields and a
// coordinate ascent from the ground mode and the first draw. A lower bound
// for the true constant.
double calibrate_agmon_c1(const Space& sp, int samples, std::uint64_t seed = 1);

struct LogLinearFit {
  double slope = 0, intercept = 0, rms = 0;
  int points = 0;
};
// Least-squares fit of log(y) = intercept + slope t over points with
// t in [t0, t1] and y > 0.
LogLinearFit fit_log_linear(const std::vector<double>& t, const std::vector<double>& y, double t0, double t1);

}  // namespace mprb
