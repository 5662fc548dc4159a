// Desk-scale acceptance checks. Each criterion prints one line
//   criterion N: PASS|FAIL  <measurements>
// and the process exits nonzero if any selected criterion fails.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mprb/attractor.hpp"
#include "mprb/audit.hpp"
#include "mprb/config.hpp"
#include "mprb/errors.hpp"
#include "mprb/io.hpp"
#include "mprb/parallel.hpp"
#include "oracles.hpp"
#include "run_config.hpp"

using namespace mprb;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

struct Outcome {
  bool pass = false;
  std::string summary;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DomainSpec domain(int Nh, int Mv, int Nv, double ax = 2.0, double ay = 2.0) {
  DomainSpec d;
  d.Nh = Nh, d.Mv = Mv, d.Nv = Nv, d.ax = ax, d.ay = ay;
  return d;
}

// The 8 x 8 horizontal x 32 vertical working resolution.
SpacePtr working_space() {
  static SpacePtr sp = Space::build(domain(4, 32, 8));
  return sp;
}

DimensionlessParams params(double Ra, double Pr, double K) { return DimensionlessParams::make(Ra, Pr, K, 1, 1, 1, 2, 2); }

double calibrated_c1() {
  static const double c1 = calibrate_agmon_c1(*working_space(), 20, 1);
  return c1;
}

State random_state(const Space& sp, std::uint64_t seed, double ru = 1, double rg = 1, double rt = 1) {
  EnsembleSpec e;
  e.seed = seed;
  e.radius_u = ru, e.radius_gamma = rg, e.radius_theta = rt;
  return ensemble_member(sp, e, 0);
}

// Criterion-4 trajectory, shared with criterion 5.
const Trajectory& blob_run() {
  static const Trajectory tr = [] {
    const GalerkinSystem sys(working_space(), params(100, 10, 0.05), ModelKind::micropolar);
    State s0 = zero_state(sys.space());
    s0.theta = temperature_blob(sys.space(), 1.5, 0.25);
    return integrate(sys, s0, 0.3, 1e-3, Scheme::imex_cnab2);
  }();
  return tr;
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sp = Space::build(domain(8, 64, 8));
  const double elapsed = seconds_since(t0);
  double worst = 0;
  for (auto op : {OperatorKind::scalar_laplacian, OperatorKind::vector_laplacian, OperatorKind::stokes}) {
    const auto& ev = sp->basis(op).eigenvalues;
    worst = std::max(worst, std::abs(*std::min_element(ev.begin(), ev.end()) - kPi2));
  }
  return {worst <= 1e-8 && elapsed < 30.0,
          fmt("max |lambda1 - pi^2| = %.3e (limit 1e-8), build %.2f s (limit 30 s)", worst, elapsed)};
}

Outcome criterion2() {
  double worst_div = 0, worst_wall = 0;
  const auto sp = working_space();
  const auto& b = sp->basis(OperatorKind::stokes);
  for (std::size_t i = 0; i < b.size(); ++i) {
    Field f = zero_field(*sp, OperatorKind::stokes);
    f.c[i] = 1.0;
    const double h1 = std::sqrt(b.eigenvalues[i]);
    worst_div = std::max(worst_div, max_abs(divergence(*sp, f)) / h1);
  }
  for (const auto& blk : b.blocks) {
    const double s = b.scale(b.wavevectors[blk.wavevector]);
    for (const auto& sl : blk.slots) {
      const auto& p = b.profiles[sl.profile];
      for (double z : {0.0, 1.0}) {
        double wall = 0;
        for (int c = 0; c < 3; ++c) wall += std::abs(sl.a[c] * p.eval(z, 0) + sl.b[c] * p.eval(z, 1));
        worst_wall = std::max(worst_wall, 2 * s * wall / std::sqrt(sl.eigenvalue));
      }
    }
  }

  double worst_disp = 0;
  int compared = 0;
  for (const auto& d : {domain(4, 32, 8), domain(8, 64, 8)}) {
    const auto st = build_stokes_basis(d);
    for (std::size_t bi = 0; bi < st->blocks.size(); ++bi) {
      const auto& k = st->wavevectors[bi];
      if (k.k2 == 0) continue;
      const auto roots = oracle::poloidal_dispersion(std::sqrt(k.k2), d.Nv);
      for (const auto& sl : st->blocks[bi].slots) {
        const double ref = sl.comp == 1 ? roots[sl.j - 1] : k.k2 + sl.j * sl.j * kPi2;
        worst_disp = std::max(worst_disp, std::abs(sl.eigenvalue - ref) / ref);
        ++compared;
      }
    }
  }
  const bool pass = worst_div <= 1e-10 && worst_wall <= 1e-10 && worst_disp <= 1e-6;
  return {pass, fmt("%zu modes: max |div|/|.|_H1 = %.2e, max wall/|.|_H1 = %.2e (limit 1e-10); "
                    "%d k != 0 eigenvalues vs dispersion roots: max rel err %.2e (limit 1e-6)",
                    b.size(), worst_div, worst_wall, compared, worst_disp)};
}

Outcome criterion3() {
  const auto sp = working_space();
  const auto& b = sp->basis(OperatorKind::vector_laplacian);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-1, 1);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    Field g = zero_field(*sp, OperatorKind::vector_laplacian);
    for (std::size_t i = 0; i < g.c.size(); ++i) g.c[i] = U(rng) * kPi2 / b.eigenvalues[i];
    const GridField gd = grad_div(*sp, g);
    const GridField lap = laplacian(*sp, g);
    const double lhs = grid_inner(*sp, gd, lap);
    const double rhs = grid_inner(*sp, gd, gd);
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  return {worst <= 1e-10, fmt("100 random gamma: max |(grad div g, Lap g) - |grad div g|^2| / |grad div g|^2 = %.3e "
                              "(limit 1e-10)",
                              worst)};
}

Outcome criterion4() {
  const Trajectory& tr = blob_run();
  std::vector<double> t, p;
  for (const auto& r : tr.records) t.push_back(r.t), p.push_back(r.norms.pos_part);
  const LogLinearFit f = fit_log_linear(t, p, 0.0, 0.3);
  const double rate = -f.slope;
  // Points with |(T-1)+| = 0 carry no rate information and are skipped by the fit.
  double last = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (p[i] > 0) last = t[i];
  const bool pass = f.points >= 3 && rate >= 0.95 * kPi2;
  return {pass, fmt("|(T-1)+| from %.4g, positive until t = %.3g, fitted decay rate %.4f over %d points "
                    "(limit 0.95 pi^2 = %.4f)",
                    p.front(), last, rate, f.points, 0.95 * kPi2)};
}

Outcome criterion5() {
  const Trajectory& tr = blob_run();
  const AuditRecord r = energy_bound_audit(tr, tr.params, 1e-6);
  return {r.status == AuditStatus::pass,
          fmt("%s; worst margin %.6g at t = %.4g, tolerance %.3g", r.detail.c_str(), r.worst_margin, r.t_worst,
              r.tolerance)};
}

Outcome criterion6() {
  const double c1 = calibrated_c1();
  auto dp = params(100, 10, 0.05);
  dp = dp.with_Pr(1.05 * prandtl_threshold(dp, c1));
  const HReport h = check_condition_H(dp, c1);
  const GalerkinSystem sys(working_space(), dp, ModelKind::micropolar);
  IntegrateOptions o;
  o.diag_every = 5;
  const Trajectory tr = integrate(sys, random_state(sys.space(), 6, 2, 2, 2), 5.0, 1e-2, Scheme::imex_euler, o);
  double t_star = -1;
  const AuditRecord ball = enstrophy_ball_audit(tr, dp, c1, 1e-3, &t_star);
  const double R = ball_radius(dp);
  double maxV = 0;
  for (const auto& r : tr.records)
    if (t_star >= 0 && r.t >= t_star) maxV = std::max(maxV, r.norms.V);

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(0, 1);
  int held = 0, positive = 0;
  double worst_p = -std::numeric_limits<double>::infinity();
  while (held < 100) {
    auto q = DimensionlessParams::make(std::pow(10.0, 4 * U(rng)), 1, 0.01, 0.2 + 3 * U(rng), 0.2 + 8 * U(rng), 1, 2, 2);
    q = q.with_Pr(prandtl_threshold(q, c1) * (1 + 4 * U(rng)));
    if (!check_condition_H(q, c1).satisfied) continue;
    ++held;
    const double pr = radius_polynomial(ball_radius(q), q, c1) / (32 * q.Ra * q.Ra * q.A);
    worst_p = std::max(worst_p, pr);
    if (pr > 0) ++positive;
  }
  const bool pass = h.satisfied && ball.status == AuditStatus::pass && t_star >= 0 && maxV <= R * (1 + 1e-3) &&
                    tr.records.back().t >= 5.0 - 1e-9 && positive == 0;
  return {pass, fmt("c1 = %.4f, Pr = %.2f, R = %.6g, t* = %.3g, max V after t* = %.6g over t <= %.3g; "
                    "100 (H) points: max p(R)/(32 Ra^2 A) = %.4f, %d positive",
                    c1, dp.Pr, R, t_star, maxV, tr.records.back().t, worst_p, positive)};
}

Outcome criterion7() {
  const auto sp = Space::build(domain(1, 8, 1));
  const GalerkinSystem sys(sp, params(100, 10, 0.05), ModelKind::micropolar);
  const State s0 = random_state(*sp, 7);
  const double H = 0.05;

  const Trajectory oracle = oracle_integrate(sys, s0, H, 1e-12);
  const double oracle_rate = max_residual_rate(energy_residuals(oracle, oracle.params));

  const std::vector<double> dts{2.5e-4, 1.25e-4, 6.25e-5};
  std::string text = fmt("dim %zu, oracle residual rate %.2e", sys.dimension(), oracle_rate);
  bool pass = oracle_rate <= 1e-8;
  for (auto scheme : {Scheme::imex_euler, Scheme::imex_cnab2}) {
    std::vector<double> rates;
    for (double dt : dts) {
      const Trajectory tr = integrate(sys, s0, H, dt, scheme);
      rates.push_back(max_residual_rate(energy_residuals(tr, tr.params)));
    }
    const int p = formal_order(scheme);
    text += fmt("; %s rates", to_string(scheme));
    for (double r : rates) text += fmt(" %.3e", r);
    text += " slopes";
    for (std::size_t i = 0; i + 1 < rates.size(); ++i) {
      const double s = std::log2(rates[i] / rates[i + 1]);
      text += fmt(" %.3f", s);
      pass = pass && std::abs(s - p) <= 0.2;
    }
    text += fmt(" (order %d +- 0.2)", p);
  }
  return {pass, text};
}

Outcome criterion8() {
  const auto sp = working_space();
  const auto dp = params(100, 10, 0.0);
  const GalerkinSystem sys(sp, dp, ModelKind::micropolar);
  State a = random_state(*sp, 8);
  State b = a;
  b.gamma = random_state(*sp, 88, 1, 3, 1).gamma;
  Stepper sa(sys, 1e-3, Scheme::imex_cnab2), sb(sys, 1e-3, Scheme::imex_cnab2);
  double dev = 0;
  for (int i = 0; i < 100; ++i) {
    a = sa.step(a);
    b = sb.step(b);
    for (std::size_t k = 0; k < a.u.c.size(); ++k) dev = std::max(dev, std::abs(a.u.c[k] - b.u.c[k]));
    for (std::size_t k = 0; k < a.theta.c.size(); ++k) dev = std::max(dev, std::abs(a.theta.c[k] - b.theta.c[k]));
  }
  const ProjectionReport r = newtonian_projection_compare(sp, dp, random_state(*sp, 8), 0.1, 1e-3, Scheme::imex_cnab2);
  const bool pass = dev <= 1e-12 && r.max_step_increment <= 1e-12 && r.max_deviation <= 1e-12;
  return {pass, fmt("gamma0 swap: max coefficient deviation %.3e over 100 steps; coupled vs newtonian over %lld "
                    "steps: max deviation %.3e, max per-step increment %.3e (limit 1e-12)",
                    dev, r.steps, r.max_deviation, r.max_step_increment)};
}

Outcome criterion9() {
  const auto dp = params(100, 10, 0.0);
  const GalerkinSystem sys(working_space(), dp, ModelKind::micropolar);
  EnsembleSpec e;
  e.members = 3;
  e.seed = 9;
  SampleWindow w;
  w.burn_in = gamma_decay_burn_in(dp);
  w.window = 0.1;
  w.cadence = 0.05;
  w.dt = 1e-3;
  w.scheme = Scheme::imex_cnab2;
  const AttractorSample s = sample_omega_limit(sys, make_ensemble(sys.space(), e), w);
  const double limit = 2 * std::exp(-10.0) * e.radius_gamma;
  const GammaReport g = gamma_on_A0_audit(s, limit);
  return {g.pass && !s.states.empty(), fmt("burn-in %.4f, %zu samples, max |gamma| = %.3e (limit 2 e^-10 r = %.3e)",
                                           w.burn_in, s.states.size(), g.max_gamma, limit)};
}

Outcome criterion10(const std::string& scenario) {
  const auto t0 = std::chrono::steady_clock::now();
  const double c1 = calibrated_c1();

  // Subcritical: every attractor is the conduction state.
  auto sub = params(100, 10, 0.0);
  sub = sub.with_Pr(1.2 * prandtl_threshold(sub, c1));
  EnsembleSpec e;
  e.members = 3;
  e.seed = 10;
  SampleWindow w;
  w.burn_in = 2.0;
  w.window = 1.0;
  w.cadence = 0.25;
  w.dt = 1e-2;
  w.scheme = Scheme::imex_euler;
  const auto rows = k_sweep(working_space(), sub, {0.1, 0.05, 0.02, 0.01, 0.0}, e, w, c1);
  double worst_sub = 0;
  bool pass = true;
  for (const auto& r : rows) {
    if (r.refused) pass = false;
    worst_sub = std::max(worst_sub, r.dist_X);
  }
  pass = pass && worst_sub <= 1e-5;
  std::string text = fmt("subcritical Pr %.1f: max dist_X %.3e (limit 1e-5)", sub.Pr, worst_sub);

  // Supercritical scenario from the shipped configuration file.
  const cli::RunConfig rc = cli::resolve(KeyValueConfig::load(scenario));
  const auto sp = Space::build(rc.domain);
  EnsembleSpec es = rc.ensemble;
  const double c1s = rc.audit.c1 > 0 ? rc.audit.c1 : c1;
  const auto sup = k_sweep(sp, rc.params, rc.Ks, es, rc.window, c1s);
  text += fmt("; supercritical Ra %.0f Pr %.0f dist_X:", rc.params.Ra, rc.params.Pr);
  for (const auto& r : sup) {
    if (r.refused) pass = false;
    text += fmt(" K=%g:%.3e", r.K, r.dist_X);
  }
  for (std::size_t i = 0; i + 2 < sup.size(); ++i)
    if (sup[i + 1].dist_X > 2 * sup[i].dist_X) pass = false;
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 1800;
  text += fmt(" (nonincreasing within factor 2); %.0f s (limit 1800 s)", elapsed);
  return {pass, text};
}

Outcome criterion11() {
  const auto sp = Space::build(domain(2, 16, 2));
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(1, 40);
  std::uniform_real_distribution<double> radius(0.1, 3);
  int mismatches = 0;
  set_thread_count(4);
  for (int pair = 0; pair < 50; ++pair) {
    const Metric metric = pair % 2 ? Metric::Z : Metric::X;
    auto cloud = [&](int n, std::uint64_t seed) {
      AttractorSample s;
      s.metric = metric;
      s.params = params(100, 10, 0.05);
      EnsembleSpec e;
      e.members = n;
      e.seed = seed;
      e.radius_u = radius(rng), e.radius_gamma = radius(rng), e.radius_theta = radius(rng);
      s.states = make_ensemble(*sp, e).members;
      return s;
    };
    AttractorSample A = cloud(size(rng), 1000 + pair);
    AttractorSample B = cloud(size(rng), 2000 + pair);
    // Every fifth pair carries duplicates so ties have to break by index.
    if (pair % 5 == 0) {
      B.states.push_back(B.states.front());
      A.states.push_back(A.states.back());
    }
    const SemidistReport r = hausdorff_semidist(*sp, A, B);
    const auto ref = oracle::brute_semidist(*sp, A.states, B.states, metric, A.params.M);
    if (r.value != ref.value || r.index_a != ref.a || r.index_b != ref.b) ++mismatches;
  }
  set_thread_count(0);
  return {mismatches == 0, fmt("50 random pairs, %d mismatches against the double loop", mismatches)};
}

Outcome criterion12() {
  const auto sp = working_space();
  const GalerkinSystem sys(sp, params(2500, 10, 0.05), ModelKind::micropolar);
  const State s0 = random_state(*sp, 12, 3, 1, 1);
  std::vector<std::string> outputs;
  for (int threads : {1, 4, 8}) {
    set_thread_count(threads);
    IntegrateOptions o;
    o.diag_every = 5;
    const Trajectory tr = integrate(sys, s0, 0.05, 1e-3, Scheme::imex_cnab2, o);
    std::ostringstream os;
    write_timeseries_csv(os, tr);
    outputs.push_back(os.str());
  }
  set_thread_count(0);
  const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2];
  return {same, fmt("time-series CSV (%zu bytes) at 1, 4, 8 threads: %s", outputs[0].size(),
                    same ? "byte-identical" : "differs")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> selected;
  std::string scenario = MPRB_SUPERCRITICAL_SCENARIO;
  app.add_option("--criterion", selected, "criteria to run (default: all)")->check(CLI::Range(1, 12));
  app.add_option("--scenario", scenario, "supercritical sweep configuration for criterion 10");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (int i = 1; i <= 12; ++i) selected.push_back(i);

  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4,  criterion5,
      criterion6, criterion7, criterion8, criterion9,  [&] { return criterion10(scenario); },
      criterion11, criterion12};

  int failed = 0;
  for (int n : selected) {
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.summary.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
