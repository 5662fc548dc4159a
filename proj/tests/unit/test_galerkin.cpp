#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "mprb/attractor.hpp"
#include "mprb/errors.hpp"
#include "mprb/galerkin.hpp"
#include "mprb/parallel.hpp"

using namespace mprb;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

State random_state(const Space& sp, std::uint64_t seed, double r = 1.0) {
  EnsembleSpec e;
  e.seed = seed;
  e.radius_u = e.radius_gamma = e.radius_theta = r;
  return ensemble_member(sp, e, 0);
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double slope(double e1, double e2, double ratio) { return std::log(e1 / e2) / std::log(ratio); }

}  // namespace

TEST_CASE("zero state has zero tendency and is a fixed point") {
  const auto sp = fixture::small();
  for (auto model : {ModelKind::micropolar, ModelKind::newtonian}) {
    const GalerkinSystem sys(sp, fixture::params(), model);
    const State z = zero_state(*sp);
    const Tendency t = sys.rhs(z);
    CHECK(max_abs(t.u) == 0);
    CHECK(max_abs(t.gamma) == 0);
    CHECK(max_abs(t.theta) == 0);
    for (auto scheme : {Scheme::imex_euler, Scheme::imex_cnab2})
      for (double dt : {1e-4, 1e-2, 1.0}) {
        Stepper st(sys, dt, scheme);
        State s = z;
        for (int i = 0; i < 3; ++i) s = st.step(s);
        CHECK(l2_norm(s.u) + l2_norm(s.gamma) + l2_norm(s.theta) == 0);
      }
  }
}

TEST_CASE("pure diffusion of the ground temperature mode") {
  const auto sp = fixture::small();
  const GalerkinSystem sys(sp, fixture::params(), ModelKind::micropolar);
  State s = zero_state(*sp);
  s.theta.c[0] = 0.7;
  const Tendency t = sys.rhs(s);
  CHECK(t.theta[0] == doctest::Approx(-kPi2 * 0.7).epsilon(1e-13));
  for (std::size_t i = 1; i < t.theta.size(); ++i) CHECK(std::abs(t.theta[i]) <= 1e-13);

  const double dt = 0.01;
  Stepper st(sys, dt, Scheme::imex_euler);
  const State n = st.step(s);
  CHECK(n.theta.c[0] == doctest::Approx(0.7 / (1 + kPi2 * dt)).epsilon(1e-14));
}

TEST_CASE("K = 0: the u tendency ignores gamma") {
  const auto sp = fixture::small();
  const GalerkinSystem sys(sp, fixture::params(100, 10, 0.0), ModelKind::micropolar);
  State a = random_state(*sp, 1);
  State b = a;
  b.gamma = random_state(*sp, 2).gamma;
  const Tendency ta = sys.rhs(a), tb = sys.rhs(b);
  CHECK(ta.u == tb.u);
  CHECK(ta.theta == tb.theta);
}

TEST_CASE("newtonian model forces K = 0") {
  const auto sp = fixture::tiny();
  const GalerkinSystem sys(sp, fixture::params(100, 10, 0.3), ModelKind::newtonian);
  CHECK(sys.K() == 0);
  CHECK(sys.params().K == 0);
}

TEST_CASE("integrate bookkeeping") {
  const auto sp = fixture::tiny();
  const GalerkinSystem sys(sp, fixture::params(), ModelKind::micropolar);
  const State s0 = random_state(*sp, 3);
  SUBCASE("zero horizon keeps only the initial state") {
    const Trajectory tr = integrate(sys, s0, 0.0, 1e-3, Scheme::imex_euler);
    CHECK(tr.records.size() == 1);
    CHECK(tr.samples.size() == 1);
  }
  SUBCASE("records at cadence, ending exactly on the horizon") {
    IntegrateOptions opt;
    opt.diag_every = 3;
    int seen = 0;
    opt.observer = [&](const State&, const StepRecord&) { ++seen; };
    const Trajectory tr = integrate(sys, s0, 0.1, 1e-2, Scheme::imex_cnab2, opt);
    CHECK(seen == 11);
    CHECK(tr.records.size() == 5);  // t = 0, 0.03, 0.06, 0.09, 0.1
    CHECK(tr.records.back().t == doctest::Approx(0.1).epsilon(1e-15));
    for (std::size_t i = 1; i < tr.records.size(); ++i) CHECK(tr.records[i].t > tr.records[i - 1].t);
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(integrate(sys, s0, -1, 1e-3, Scheme::imex_euler), ConfigError);
    CHECK_THROWS_AS(integrate(sys, s0, 1, 0, Scheme::imex_euler), ConfigError);
    CHECK_THROWS_AS(Stepper(sys, 1e-3, Scheme::oracle_rk78), ConfigError);
  }
}

TEST_CASE("blow-up and non-finite states are reported with the time") {
  const auto sp = fixture::tiny();
  const GalerkinSystem sys(sp, fixture::params(), ModelKind::micropolar);
  State s = random_state(*sp, 4, 10.0);
  s.t = 2.5;
  Stepper st(sys, 1e-3, Scheme::imex_euler, 1.0);
  try {
    st.step(s);
    FAIL("expected a blow-up error");
  } catch (const NumericalError& e) {
    CHECK(e.time() == doctest::Approx(2.501));
  }
  s.theta.c[0] = std::nan("");
  CHECK_THROWS_AS(sys.rhs(s), NumericalError);
}

TEST_CASE("u stays divergence-free along a trajectory") {
  const auto sp = fixture::small();
  const GalerkinSystem sys(sp, fixture::params(), ModelKind::micropolar);
  const Trajectory tr = [&] {
    IntegrateOptions o;
    o.sample_every = 10;
    return integrate(sys, random_state(*sp, 5), 0.05, 1e-3, Scheme::imex_cnab2, o);
  }();
  for (const auto& s : tr.samples) CHECK(max_abs(divergence(*sp, s.u)) <= 1e-8 * std::max(1e-300, h1_seminorm(*sp, s.u)));
}

TEST_CASE("oracle integrator") {
  const auto sp = fixture::tiny();
  SUBCASE("linear diffusion mode decays as exp(-pi^2 t)") {
    const GalerkinSystem sys(sp, fixture::params(), ModelKind::micropolar);
    State s = zero_state(*sp);
    s.theta.c[0] = 1.0;
    OracleOptions o;
    o.keep_samples = true;
    const Trajectory tr = oracle_integrate(sys, s, 0.2, 1e-12, o);
    CHECK(tr.samples.back().theta.c[0] == doctest::Approx(std::exp(-kPi2 * 0.2)).epsilon(1e-10));
  }
  SUBCASE("energy identities hold along the oracle trajectory") {
    const GalerkinSystem sys(sp, fixture::params(), ModelKind::micropolar);
    const double tol = 1e-10;
    const Trajectory tr = oracle_integrate(sys, random_state(*sp, 6), 0.1, tol);
    const auto res = energy_residuals(tr, tr.params);
    double total = 0;
    for (const auto& r : res) total += std::abs(r.r_u) + std::abs(r.r_gamma) + std::abs(r.r_theta);
    CHECK(total / 0.1 <= 1e-8);
  }
  SUBCASE("dimension limit") {
    const GalerkinSystem big(fixture::space(4, 32, 8), fixture::params(), ModelKind::micropolar);
    CHECK_THROWS_AS(oracle_integrate(big, zero_state(big.space()), 0.1, 1e-8), ConfigError);
  }
  SUBCASE("step budget exhaustion is a stiffness error") {
    const GalerkinSystem sys(sp, fixture::params(), ModelKind::micropolar);
    OracleOptions o;
    o.max_steps = 3;
    CHECK_THROWS_AS(oracle_integrate(sys, random_state(*sp, 7), 1.0, 1e-12, o), StiffnessError);
  }
}

TEST_CASE("IMEX schemes converge to the oracle at their formal order") {
  const auto sp = fixture::tiny();
  const GalerkinSystem sys(sp, fixture::params(), ModelKind::micropolar);
  const State s0 = random_state(*sp, 8);
  const double H = 0.1;
  OracleOptions o;
  o.keep_samples = true;
  const State ref = oracle_integrate(sys, s0, H, 1e-12, o).samples.back();
  for (auto scheme : {Scheme::imex_euler, Scheme::imex_cnab2}) {
    std::vector<double> err;
    for (double dt : {2e-3, 1e-3, 5e-4}) err.push_back(state_distance_l2(integrate(sys, s0, H, dt, scheme).samples.back(), ref));
    const double p = formal_order(scheme);
    CHECK(std::abs(slope(err[0], err[1], 2) - p) <= 0.2);
    CHECK(std::abs(slope(err[1], err[2], 2) - p) <= 0.2);
  }
}

TEST_CASE("K = 0 microrotation decays at least at the rate L pi^2 / (eps M)") {
  const auto sp = fixture::small();
  const auto dp = fixture::params(100, 10, 0.0);
  const GalerkinSystem sys(sp, dp, ModelKind::micropolar);
  const Trajectory tr = integrate(sys, random_state(*sp, 9), 0.05, 2e-4, Scheme::imex_cnab2);
  const double g0 = tr.records.front().norms.l2_gamma;
  const double rate = dp.L * kPi2 / (dp.eps * dp.M);
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    CHECK(tr.records[i].norms.l2_gamma <= tr.records[i - 1].norms.l2_gamma);
    CHECK(tr.records[i].norms.l2_gamma <= g0 * std::exp(-rate * tr.records[i].t) * (1 + 1e-6));
  }
}

TEST_CASE("diagnostics are bit-identical across thread counts") {
  const auto sp = fixture::small();
  const GalerkinSystem sys(sp, fixture::params(), ModelKind::micropolar);
  const State s0 = random_state(*sp, 10);
  auto run = [&](int threads) {
    set_thread_count(threads);
    IntegrateOptions o;
    o.diag_every = 5;
    return integrate(sys, s0, 0.02, 1e-3, Scheme::imex_cnab2, o);
  };
  const Trajectory a = run(1), b = run(3);
  set_thread_count(0);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].norms.V == b.records[i].norms.V);
    CHECK(a.records[i].norms.pos_part == b.records[i].norms.pos_part);
    CHECK(a.records[i].terms.theta_u3 == b.records[i].terms.theta_u3);
  }
  CHECK(a.samples.back().u.c == b.samples.back().u.c);
}

TEST_CASE("energy residuals") {
  const auto sp = fixture::tiny();
  const GalerkinSystem sys(sp, fixture::params(), ModelKind::micropolar);
  SUBCASE("zero trajectory") {
    const Trajectory tr = integrate(sys, zero_state(*sp), 0.01, 1e-3, Scheme::imex_euler);
    for (const auto& r : energy_residuals(tr, tr.params)) {
      CHECK(r.r_u == 0);
      CHECK(r.r_gamma == 0);
      CHECK(r.r_theta == 0);
    }
  }
  SUBCASE("halving dt shrinks the residual rate") {
    const State s0 = random_state(*sp, 11);
    auto rate = [&](double dt, Scheme sc) {
      const Trajectory tr = integrate(sys, s0, 0.05, dt, sc);
      return max_residual_rate(energy_residuals(tr, tr.params));
    };
    CHECK(rate(5e-4, Scheme::imex_euler) < rate(1e-3, Scheme::imex_euler));
    CHECK(rate(5e-4, Scheme::imex_cnab2) < rate(1e-3, Scheme::imex_cnab2));
  }
}

TEST_CASE("scheme and model names") {
  CHECK(parse_scheme("euler") == Scheme::imex_euler);
  CHECK(parse_scheme("imex-cnab2") == Scheme::imex_cnab2);
  CHECK(parse_model("newtonian") == ModelKind::newtonian);
  CHECK_THROWS_AS(parse_scheme("rk4"), ConfigError);
  CHECK_THROWS_AS(parse_model("maxwell"), ConfigError);
  CHECK(formal_order(Scheme::imex_euler) == 1);
  CHECK(formal_order(Scheme::imex_cnab2) == 2);
}
