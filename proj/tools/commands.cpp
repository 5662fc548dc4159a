#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mprb/errors.hpp"
#include "mprb/io.hpp"

namespace mprb::cli {

namespace fs = std::filesystem;

namespace {

std::string out_path(const RunConfig& rc, const std::string& file) {
  std::error_code ec;
  fs::create_directories(rc.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + rc.out_dir + "': " + ec.message());
  return (fs::path(rc.out_dir) / file).string();
}

void write_sidecar(const RunConfig& rc, const char* command) {
  write_text_file(out_path(rc, std::string(command) + ".resolved-config"), rc.resolved_text());
}

template <class F>
void write_stream(const std::string& path, F&& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  body(os);
  if (!os) throw IoError("write failed: " + path);
}

Trajectory run_trajectory(const RunConfig& rc, const GalerkinSystem& sys, const State& s0) {
  if (rc.scheme == Scheme::oracle_rk78) return oracle_integrate(sys, s0, rc.horizon, rc.oracle_tol);
  IntegrateOptions opt;
  opt.diag_every = rc.diag_every;
  const auto start = std::chrono::steady_clock::now();
  double next_log = 0.1 * rc.horizon;
  opt.observer = [&](const State& s, const StepRecord& r) {
    if (s.t + 1e-12 < next_log) return;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "[simulate] t = %.4g / %.4g  V = %.6g  |theta| = %.6g  (%.1f s)\n", s.t, rc.horizon,
                 r.norms.V, r.norms.l2_theta, secs);
    next_log += 0.1 * rc.horizon;
  };
  return integrate(sys, s0, rc.horizon, effective_dt(rc, sys, s0), rc.scheme, opt);
}

}  // namespace

SpacePtr build_space(const RunConfig& rc) { return Space::build(rc.domain, rc.cache_dir); }

State initial_state(const RunConfig& rc, const Space& sp) {
  if (rc.init == "zero") return zero_state(sp);
  if (rc.init == "random") {
    EnsembleSpec e;
    e.seed = rc.seed;
    e.radius_u = rc.init_radius_u;
    e.radius_gamma = rc.init_radius_gamma;
    e.radius_theta = rc.init_radius_theta;
    e.validate();
    return ensemble_member(sp, e, 0);
  }
  if (rc.init == "blob") {
    State s = zero_state(sp);
    s.theta = temperature_blob(sp, rc.blob_peak, rc.blob_width);
    return s;
  }
  Checkpoint c = load_checkpoint(rc.init_checkpoint);
  if (!(c.domain == rc.domain)) throw ConfigError("checkpoint domain does not match the configuration");
  check_state(sp, c.state);
  return c.state;
}

double effective_dt(const RunConfig& rc, const GalerkinSystem& sys, const State& s0) {
  if (!rc.auto_dt) return rc.dt;
  const double dt = sys.cfl_dt(s0);
  std::fprintf(stderr, "[dt] auto: %.17g\n", dt);
  return dt;
}

double effective_c1(const RunConfig& rc, const Space& sp) {
  if (rc.audit.c1 > 0) return rc.audit.c1;
  const double c1 = calibrate_agmon_c1(sp, rc.calibrate_samples, rc.seed);
  std::fprintf(stderr, "[calibrate] c1 = %.17g (%d samples, seed %llu)\n", c1, rc.calibrate_samples,
               static_cast<unsigned long long>(rc.seed));
  return c1;
}

int cmd_basis(const RunConfig& rc) {
  write_sidecar(rc, "basis");
  const std::string cache = rc.cache_dir.empty() ? out_path(rc, "basis-cache") : rc.cache_dir;
  std::ostringstream rep;
  bool ok = true;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-18s %8s %22s %12s %14s %14s %6s\n", "operator", "modes", "lambda1", "deviation",
                "min_poincare1", "min_poincare2", "cache");
  rep << buf;
  for (OperatorKind op : {OperatorKind::scalar_laplacian, OperatorKind::vector_laplacian, OperatorKind::stokes}) {
    bool hit = false;
    const BasisPtr b = load_or_build_basis(op, rc.domain, cache, &hit);
    const PoincareReport p = poincare_audit(*b, 16, rc.seed);
    std::snprintf(buf, sizeof buf, "%-18s %8zu %22.17g %12.3e %14.6e %14.6e %6s\n", to_string(op), b->size(),
                  p.lambda1, p.deviation, p.min_first_order, p.min_second_order, hit ? "hit" : "built");
    rep << buf;
    if (!(std::abs(p.deviation) <= 1e-8)) ok = false;
  }
  write_text_file(out_path(rc, "poincare.txt"), rep.str());
  std::fputs(rep.str().c_str(), stdout);
  if (!ok) throw BasisError("smallest eigenvalue deviates from pi^2 by more than 1e-8");
  return 0;
}

int cmd_simulate(const RunConfig& rc) {
  write_sidecar(rc, "simulate");
  const SpacePtr sp = build_space(rc);
  const GalerkinSystem sys(sp, rc.params, rc.model);
  const State s0 = initial_state(rc, *sp);
  const Trajectory traj = run_trajectory(rc, sys, s0);
  write_stream(out_path(rc, "timeseries.csv"), [&](std::ostream& os) { write_timeseries_csv(os, traj); });
  save_checkpoint(out_path(rc, "final.chk"), Checkpoint{rc.domain, rc.params, rc.model, traj.samples.back()});
  std::printf("simulated %zu records to t = %.6g; max energy residual rate %.3e\n", traj.records.size(),
              traj.records.back().t, max_residual_rate(energy_residuals(traj, traj.params)));
  return 0;
}

int cmd_audit(const RunConfig& rc, const std::string& timeseries_csv) {
  write_sidecar(rc, "audit");
  const SpacePtr sp = build_space(rc);
  Trajectory traj;
  if (!timeseries_csv.empty()) {
    std::ifstream is(timeseries_csv);
    if (!is) throw IoError("cannot open " + timeseries_csv);
    traj = read_timeseries_csv(is, timeseries_csv);
    traj.model = rc.model;
    traj.params = rc.model == ModelKind::newtonian ? rc.params.with_K(0.0) : rc.params;
  } else {
    const GalerkinSystem sys(sp, rc.params, rc.model);
    traj = run_trajectory(rc, sys, initial_state(rc, *sp));
    write_stream(out_path(rc, "timeseries.csv"), [&](std::ostream& os) { write_timeseries_csv(os, traj); });
  }
  AuditConfig cfg = rc.audit;
  cfg.c1 = effective_c1(rc, *sp);
  const AuditReport rep = run_audits(traj, traj.params, cfg);
  write_stream(out_path(rc, "audit.csv"), [&](std::ostream& os) { write_audit_csv(os, rep, rc.name); });
  std::ostringstream table;
  write_audit_table(table, rep);
  write_text_file(out_path(rc, "audit.txt"), table.str());
  std::fputs(table.str().c_str(), stdout);
  return rep.all_applicable_pass() ? 0 : kAuditFailedExit;
}

int cmd_attractor(const RunConfig& rc) {
  write_sidecar(rc, "attractor");
  const SpacePtr sp = build_space(rc);
  const GalerkinSystem sys(sp, rc.params, rc.model);
  const Ensemble ens = make_ensemble(*sp, rc.ensemble);
  SampleWindow w = rc.window;
  w.dt = effective_dt(rc, sys, ens.members.front());
  const AttractorSample s = sample_omega_limit(sys, ens, w, rc.metric);
  for (const auto& w : s.warnings) std::fprintf(stderr, "[attractor] warning: %s\n", w.c_str());
  write_stream(out_path(rc, "sample.mprbs"), [&](std::ostream& os) { write_sample(os, s, rc.domain); });
  double max_gamma = 0;
  for (const auto& st : s.states) max_gamma = std::max(max_gamma, l2_norm(st.gamma));
  std::printf("sampled %zu states in [%.6g, %.6g]; empirical entry time %.6g; max |gamma| = %.6e\n",
              s.states.size(), rc.window.burn_in, rc.window.burn_in + rc.window.window, s.t_star, max_gamma);
  if (sys.K() == 0.0) {
    const GammaReport g = gamma_on_A0_audit(s);
    std::printf("gamma on A0: max |gamma| = %.6e (tolerance %.1e) %s\n", g.max_gamma, g.tolerance,
                g.pass ? "pass" : "fail");
  }
  return 0;
}

int cmd_sweep_k(const RunConfig& rc) {
  write_sidecar(rc, "sweep-k");
  if (rc.Ks.empty()) throw ConfigError("sweep-k needs a Ks list");
  const SpacePtr sp = build_space(rc);
  const double c1 = effective_c1(rc, *sp);
  SampleWindow w = rc.window;
  w.dt = effective_dt(rc, GalerkinSystem(sp, rc.params, rc.model), ensemble_member(*sp, rc.ensemble, 0));
  const auto rows = k_sweep(sp, rc.params, rc.Ks, rc.ensemble, w, c1);
  write_stream(out_path(rc, "sweep.csv"), [&](std::ostream& os) { write_sweep_csv(os, rows); });
  for (const auto& r : rows) {
    if (r.refused)
      std::printf("K = %-10.6g refused: %s\n", r.K, r.note.c_str());
    else
      std::printf("K = %-10.6g dist_X = %.6e  dist_Z = %.6e  samples = %d%s%s\n", r.K, r.dist_X, r.dist_Z,
                  r.n_samples, r.note.empty() ? "" : "  note: ", r.note.c_str());
  }
  return 0;
}

int cmd_calibrate(const RunConfig& rc) {
  write_sidecar(rc, "calibrate");
  const SpacePtr sp = build_space(rc);
  const double c1 = calibrate_agmon_c1(*sp, rc.calibrate_samples, rc.seed);
  const HReport h = check_condition_H(rc.params, c1);
  write_text_file(out_path(rc, "calibration.cfg"), "c1 = " + format_double(c1) + "\n");
  std::printf("c1 = %s\n", format_double(c1).c_str());
  std::printf("condition (H): %s (margin_L = %.6g, margin_Pr = %.6g, Pr threshold = %.6g)\n",
              h.satisfied ? "holds" : "fails", h.margin_L, h.margin_Pr, prandtl_threshold(rc.params, c1));
  return 0;
}

}  // namespace mprb::cli
