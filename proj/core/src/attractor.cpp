#include "mprb/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <random>

#include "mprb/errors.hpp"

namespace mprb {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

void fill_random(const Space& sp, Field& f, double radius, std::mt19937_64& rng) {
  const auto& lam = sp.basis(f.op).eigenvalues;
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (std::size_t i = 0; i < f.c.size(); ++i) f.c[i] = U(rng) * kPi2 / lam[i];
  const double n = l2_norm(f);
  if (radius == 0 || n == 0) {
    std::fill(f.c.begin(), f.c.end(), 0.0);
    return;
  }
  for (double& x : f.c) x *= radius / n;
}

// Coefficient weights realising the metric: 1 for L2, lambda_i for the H1
// seminorm (the bases are orthonormal and diagonalise the Dirichlet form).
struct MetricWeights {
  std::vector<double> u, gamma, theta;
  double sqrtM = 1;
};

MetricWeights metric_weights(const Space& sp, Metric metric, double M) {
  MetricWeights w;
  w.sqrtM = std::sqrt(M);
  auto pick = [&](OperatorKind op) {
    const auto& lam = sp.basis(op).eigenvalues;
    return metric == Metric::X ? std::vector<double>(lam.size(), 1.0) : lam;
  };
  w.u = pick(OperatorKind::stokes);
  w.gamma = pick(OperatorKind::vector_laplacian);
  w.theta = pick(OperatorKind::scalar_laplacian);
  return w;
}

double weighted_sq(const std::vector<double>& w, const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = a[i] - b[i];
    s += w[i] * d * d;
  }
  return s;
}

// Returns the distance, or +inf as soon as a partial sum exceeds `cutoff`.
// Partial sums of nonnegative terms are monotone in floating point, so an
// abandoned candidate could never have been strictly below `cutoff`.
double kernel(const MetricWeights& w, const State& a, const State& b, double cutoff) {
  const double du = std::sqrt(weighted_sq(w.u, a.u.c, b.u.c));
  if (du > cutoff) return std::numeric_limits<double>::infinity();
  const double dug = du + w.sqrtM * std::sqrt(weighted_sq(w.gamma, a.gamma.c, b.gamma.c));
  if (dug > cutoff) return std::numeric_limits<double>::infinity();
  return dug + std::sqrt(weighted_sq(w.theta, a.theta.c, b.theta.c));
}

SemidistReport semidist(const Space& sp, const std::vector<State>& A, const std::vector<State>& B, Metric metric,
                        double M) {
  SemidistReport rep;
  rep.metric = metric;
  if (A.empty()) return rep;
  if (B.empty()) throw ConfigError("semidistance to an empty sample is undefined");
  for (const auto* set : {&A, &B})
    for (const auto& s : *set) check_state(sp, s);

  const MetricWeights w = metric_weights(sp, metric, M);
  const int na = static_cast<int>(A.size());
  std::vector<double> row_min(na);
  std::vector<int> row_arg(na);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < na; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t j = 0; j < B.size(); ++j) {
      const double d = kernel(w, A[i], B[j], best);
      if (d < best) best = d, arg = static_cast<int>(j);
    }
    row_min[i] = best;
    row_arg[i] = arg;
  }
  rep.value = -1;
  for (int i = 0; i < na; ++i)
    if (row_min[i] > rep.value) {
      rep.value = row_min[i];
      rep.index_a = i;
      rep.index_b = row_arg[i];
    }
  return rep;
}

double first_entry_time(const Trajectory& traj, const DimensionlessParams& dp) {
  if (traj.records.empty()) return -1;
  const double T1 = traj.records.front().t + time_T1(traj.records.front().norms.l2_theta, dp.A);
  const double R = ball_radius(dp);
  for (const auto& r : traj.records)
    if (r.t >= T1 && r.norms.V <= R) return r.t;
  return -1;
}

double ut_distance(const State& a, const State& b) {
  double su = 0, st = 0;
  for (std::size_t i = 0; i < a.u.c.size(); ++i) su += (a.u.c[i] - b.u.c[i]) * (a.u.c[i] - b.u.c[i]);
  for (std::size_t i = 0; i < a.theta.c.size(); ++i)
    st += (a.theta.c[i] - b.theta.c[i]) * (a.theta.c[i] - b.theta.c[i]);
  return std::sqrt(su) + std::sqrt(st);
}

}  // namespace

void EnsembleSpec::validate() const {
  if (members < 1) throw ConfigError("ensemble needs at least one member");
  if (!(radius_u >= 0 && radius_gamma >= 0 && radius_theta >= 0))
    throw ConfigError("ensemble radii must be nonnegative");
}

State ensemble_member(const Space& sp, const EnsembleSpec& spec, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  State s = zero_state(sp);
  fill_random(sp, s.u, spec.radius_u, rng);
  fill_random(sp, s.gamma, spec.radius_gamma, rng);
  fill_random(sp, s.theta, spec.radius_theta, rng);
  return s;
}

Ensemble make_ensemble(const Space& sp, const EnsembleSpec& spec) {
  spec.validate();
  Ensemble e;
  e.spec = spec;
  for (int i = 0; i < spec.members; ++i) e.members.push_back(ensemble_member(sp, spec, i));
  return e;
}

const char* to_string(Metric m) { return m == Metric::X ? "X" : "Z"; }

Metric parse_metric(const std::string& s) {
  if (s == "X" || s == "x") return Metric::X;
  if (s == "Z" || s == "z") return Metric::Z;
  throw ConfigError("unknown metric '" + s + "' (expected X or Z)");
}

double metric_distance(const Space& sp, const State& a, const State& b, Metric metric, double M) {
  check_state(sp, a);
  check_state(sp, b);
  return kernel(metric_weights(sp, metric, M), a, b, std::numeric_limits<double>::infinity());
}

void SampleWindow::validate() const {
  if (!(burn_in >= 0)) throw ConfigError("burn-in must be nonnegative");
  if (!(window > 0)) throw ConfigError("sampling window must be positive");
  if (!(dt > 0)) throw ConfigError("time step must be positive");
  if (!(cadence >= dt)) throw ConfigError("sampling cadence must be at least one time step");
  if (scheme == Scheme::oracle_rk78) throw ConfigError("attractor sampling uses a fixed-step scheme");
}

AttractorSample sample_omega_limit(const GalerkinSystem& sys, const Ensemble& ens, const SampleWindow& w,
                                   Metric metric) {
  w.validate();
  const double horizon = w.burn_in + w.window;
  const int every = std::max(1, static_cast<int>(std::llround(w.cadence / w.dt)));
  const int n = static_cast<int>(ens.members.size());

  std::vector<std::vector<State>> per(n);
  std::vector<double> t_star(n, -1);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    try {
      IntegrateOptions opt;
      opt.diag_every = every;
      opt.sample_every = every;
      const Trajectory traj = integrate(sys, ens.members[i], horizon, w.dt, w.scheme, opt);
      const double tol = 1e-9 * traj.dt;
      for (const auto& s : traj.samples)
        if (s.t >= ens.members[i].t + w.burn_in - tol) per[i].push_back(s);
      t_star[i] = first_entry_time(traj, sys.params());
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  AttractorSample out;
  out.metric = metric;
  out.window = w;
  out.params = sys.params();
  out.model = sys.model();
  for (auto& v : per)
    for (auto& s : v) out.states.push_back(std::move(s));
  out.t_star = *std::max_element(t_star.begin(), t_star.end());
  if (std::any_of(t_star.begin(), t_star.end(), [](double t) { return t < 0; })) {
    out.t_star = -1;
    out.warnings.push_back("some member never entered the enstrophy ball during the run");
  } else if (w.burn_in < out.t_star) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "burn-in %.6g is shorter than the empirical entry time %.6g", w.burn_in,
                  out.t_star);
    out.warnings.emplace_back(buf);
  }
  return out;
}

SemidistReport hausdorff_semidist(const Space& sp, const AttractorSample& A, const AttractorSample& B) {
  if (A.metric != B.metric) throw ConfigError("samples carry different metric tags");
  if (A.params.M != B.params.M || A.params.A != B.params.A)
    throw ConfigError("samples were produced with incompatible parameters");
  return semidist(sp, A.states, B.states, A.metric, A.params.M);
}

std::vector<SweepRow> k_sweep(const SpacePtr& sp, const DimensionlessParams& base, const std::vector<double>& Ks,
                              const EnsembleSpec& ens_spec, const SampleWindow& w, double c1) {
  if (Ks.empty() || Ks.back() != 0.0) throw ConfigError("K list must end at 0");
  for (std::size_t i = 0; i < Ks.size(); ++i) {
    if (!(Ks[i] >= 0)) throw ConfigError("K values must be nonnegative");
    if (i > 0 && !(Ks[i] < Ks[i - 1])) throw ConfigError("K list must be strictly decreasing");
  }
  w.validate();
  const Ensemble ens = make_ensemble(*sp, ens_spec);

  std::vector<SweepRow> rows(Ks.size());
  std::vector<std::vector<State>> clouds(Ks.size());
  for (std::size_t i = 0; i < Ks.size(); ++i) {
    SweepRow& row = rows[i];
    row.K = Ks[i];
    row.burn_in = w.burn_in;
    row.window = w.window;
    const DimensionlessParams dp = base.with_K(Ks[i]);
    const HReport h = check_condition_H(dp, c1);
    if (!h.satisfied) {
      row.refused = true;
      char buf[160];
      std::snprintf(buf, sizeof buf, "condition (H) fails: margin_L = %.6g, margin_Pr = %.6g", h.margin_L,
                    h.margin_Pr);
      row.note = buf;
      continue;
    }
    const GalerkinSystem sys(sp, dp, ModelKind::micropolar);
    AttractorSample s = sample_omega_limit(sys, ens, w);
    row.n_samples = static_cast<int>(s.states.size());
    for (const auto& m : s.warnings) row.note += (row.note.empty() ? "" : "; ") + m;
    clouds[i] = std::move(s.states);
  }
  const std::size_t ref = Ks.size() - 1;
  if (rows[ref].refused) return rows;
  for (std::size_t i = 0; i < Ks.size(); ++i) {
    if (rows[i].refused) continue;
    rows[i].dist_X = semidist(*sp, clouds[i], clouds[ref], Metric::X, base.M).value;
    rows[i].dist_Z = semidist(*sp, clouds[i], clouds[ref], Metric::Z, base.M).value;
  }
  return rows;
}

double gamma_decay_burn_in(const DimensionlessParams& dp) { return 10.0 * dp.eps * dp.M / (dp.L * kPi2); }

GammaReport gamma_on_A0_audit(const AttractorSample& sample, double tolerance) {
  if (sample.params.K != 0.0 && sample.model != ModelKind::newtonian)
    throw ParameterError("gamma audit needs a sample produced with K = 0");
  if (!(tolerance > 0)) throw ConfigError("gamma audit tolerance must be positive");
  GammaReport r;
  r.tolerance = tolerance;
  for (const auto& s : sample.states) r.max_gamma = std::max(r.max_gamma, l2_norm(s.gamma));
  r.pass = r.max_gamma <= tolerance;
  return r;
}

ProjectionReport newtonian_projection_compare(const SpacePtr& sp, const DimensionlessParams& dp, const State& s0,
                                              double horizon, double dt, Scheme scheme) {
  if (dp.K != 0.0) throw ParameterError("projection comparison needs K = 0");
  if (!(horizon > 0) || !(dt > 0)) throw ConfigError("horizon and time step must be positive");
  if (scheme == Scheme::oracle_rk78) throw ConfigError("projection comparison uses a fixed-step scheme");
  const GalerkinSystem coupled(sp, dp, ModelKind::micropolar);
  const GalerkinSystem newt(sp, dp, ModelKind::newtonian);
  ProjectionReport r;
  r.steps = std::max(1LL, std::llround(horizon / dt));
  const double h = horizon / static_cast<double>(r.steps);
  Stepper a(coupled, h, scheme), b(newt, h, scheme);
  State sa = s0, sb = s0;
  double prev = ut_distance(sa, sb);
  r.max_deviation = prev;
  for (long long n = 1; n <= r.steps; ++n) {
    sa = a.step(sa);
    sb = b.step(sb);
    const double d = ut_distance(sa, sb);
    r.max_deviation = std::max(r.max_deviation, d);
    r.max_step_increment = std::max(r.max_step_increment, d - prev);
    prev = d;
  }
  return r;
}

ContinuityReport continuous_dependence_probe(const GalerkinSystem& sys, const State& s0, double delta,
                                             double horizon, double dt, Scheme scheme, std::uint64_t seed,
                                             int record_every) {
  if (!(delta >= 0)) throw ConfigError("perturbation size must be nonnegative");
  if (!(horizon > 0) || !(dt > 0)) throw ConfigError("horizon and time step must be positive");
  if (record_every < 1) throw ConfigError("record cadence must be >= 1");
  if (scheme == Scheme::oracle_rk78) throw ConfigError("continuity probe uses a fixed-step scheme");
  const Space& sp = sys.space();
  const double M = sys.params().M;

  State s1 = s0;
  if (delta > 0) {
    EnsembleSpec dir;
    dir.seed = seed;
    State p = ensemble_member(sp, dir, 0);
    const double pz = metric_distance(sp, p, zero_state(sp), Metric::Z, M);
    for (auto* f : {&p.u, &p.gamma, &p.theta})
      for (double& x : f->c) x *= delta / pz;
    axpy(1.0, p, s1);
    s1.t = s0.t;
  }

  ContinuityReport r;
  const long long steps = std::max(1LL, std::llround(horizon / dt));
  const double h = horizon / static_cast<double>(steps);
  Stepper a(sys, h, scheme), b(sys, h, scheme);
  State x = s0, y = s1;
  r.t.push_back(0);
  r.d.push_back(metric_distance(sp, x, y, Metric::Z, M));
  for (long long n = 1; n <= steps; ++n) {
    x = a.step(x);
    y = b.step(y);
    if (n % record_every == 0 || n == steps) {
      r.t.push_back(static_cast<double>(n) * h);
      r.d.push_back(metric_distance(sp, x, y, Metric::Z, M));
    }
  }
  if (delta == 0) {
    r.pass = std::all_of(r.d.begin(), r.d.end(), [](double d) { return d == 0; });
    return r;
  }
  r.fit = fit_log_linear(r.t, r.d, 0.0, horizon);
  r.exponent = r.fit.slope;
  r.pass = r.fit.points >= 2 && r.fit.rms <= r.rms_threshold;
  return r;
}

}  // namespace mprb
