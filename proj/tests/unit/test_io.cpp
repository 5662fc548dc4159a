#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "mprb/errors.hpp"
#include "mprb/io.hpp"

using namespace mprb;

namespace {

Checkpoint sample_checkpoint() {
  const auto sp = fixture::tiny();
  EnsembleSpec e;
  Checkpoint c;
  c.domain = sp->domain();
  c.params = fixture::params(123.5, 7, 0.02);
  c.model = ModelKind::newtonian;
  c.state = ensemble_member(*sp, e, 0);
  c.state.t = 0.1 + 0.2;
  return c;
}

}  // namespace

TEST_CASE("format_double keeps 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("checkpoint round trip is byte-identical") {
  const Checkpoint c = sample_checkpoint();
  std::stringstream a;
  write_checkpoint(a, c);
  const std::string bytes = a.str();
  std::istringstream in(bytes);
  const Checkpoint r = read_checkpoint(in);
  CHECK(r.domain == c.domain);
  CHECK(r.params.Ra == c.params.Ra);
  CHECK(r.params.eps == c.params.eps);
  CHECK(r.model == c.model);
  CHECK(r.state.t == c.state.t);
  CHECK(r.state.u.c == c.state.u.c);
  CHECK(r.state.gamma.c == c.state.gamma.c);
  CHECK(r.state.theta.c == c.state.theta.c);
  std::stringstream b;
  write_checkpoint(b, r);
  CHECK(b.str() == bytes);

  SUBCASE("corrupt input") {
    std::istringstream bad("not a checkpoint at all");
    CHECK_THROWS_AS(read_checkpoint(bad), IoError);
    std::istringstream cut(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(read_checkpoint(cut), IoError);
  }
  SUBCASE("files") {
    const std::string path = "test_io_roundtrip.chk";
    save_checkpoint(path, c);
    const Checkpoint f = load_checkpoint(path);
    CHECK(f.state.u.c == c.state.u.c);
    CHECK_THROWS_AS(load_checkpoint("does/not/exist.chk"), IoError);
  }
}

TEST_CASE("time series CSV") {
  const auto sp = fixture::tiny();
  const GalerkinSystem sys(sp, fixture::params(), ModelKind::micropolar);
  EnsembleSpec e;
  IntegrateOptions o;
  o.diag_every = 5;
  const Trajectory tr = integrate(sys, ensemble_member(*sp, e, 0), 0.02, 1e-3, Scheme::imex_euler, o);
  std::stringstream os;
  write_timeseries_csv(os, tr);
  const std::string text = os.str();
  CHECK(text.rfind(std::string(kTimeseriesHeader) + "\n", 0) == 0);

  std::istringstream is(text);
  const Trajectory back = read_timeseries_csv(is);
  REQUIRE(back.records.size() == tr.records.size());
  for (std::size_t i = 0; i < tr.records.size(); ++i) {
    CHECK(back.records[i].t == tr.records[i].t);
    CHECK(back.records[i].norms.V == tr.records[i].norms.V);
    CHECK(back.records[i].norms.pos_part == tr.records[i].norms.pos_part);
    CHECK(back.records[i].norms.l2_theta == tr.records[i].norms.l2_theta);
  }
  std::istringstream bad("t,x\n1,2\n");
  CHECK_THROWS_AS(read_timeseries_csv(bad), IoError);
}

TEST_CASE("audit and sweep CSV layouts") {
  AuditReport rep;
  AuditRecord r;
  r.name = "theta_bound";
  r.worst_margin = 0.5;
  r.detail = "a, \"quoted\" detail";
  rep.records.push_back(r);
  r.name = "enstrophy_ball";
  r.status = AuditStatus::not_applicable;
  r.detail = "";
  rep.records.push_back(r);
  std::ostringstream os;
  write_audit_csv(os, rep, "demo");
  CHECK(os.str() ==
        "audit,name,worst_margin,t_worst,pass,detail\n"
        "theta_bound,demo,0.5,0,pass,\"a, \"\"quoted\"\" detail\"\n"
        "enstrophy_ball,demo,0.5,0,n/a,\n");

  SweepRow a;
  a.K = 0.1, a.dist_X = 0.25, a.dist_Z = 1, a.n_samples = 4, a.burn_in = 2, a.window = 1;
  SweepRow b = a;
  b.K = 2, b.refused = true;
  std::ostringstream sw;
  write_sweep_csv(sw, {a, b});
  CHECK(sw.str() ==
        "K,dist_X,dist_Z,n_samples,burn_in,window\n"
        "0.10000000000000001,0.25,1,4,2,1\n"
        "2,nan,nan,4,2,1\n");
}

TEST_CASE("attractor sample file round trip") {
  const Checkpoint c = sample_checkpoint();
  AttractorSample s;
  s.metric = Metric::Z;
  s.params = c.params;
  s.model = ModelKind::micropolar;
  s.window.burn_in = 3;
  s.t_star = 0.75;
  s.states = {c.state, zero_state(*fixture::tiny())};
  std::stringstream os;
  write_sample(os, s, c.domain);
  const std::string bytes = os.str();
  std::istringstream is(bytes);
  DomainSpec d;
  const AttractorSample r = read_sample(is, &d);
  CHECK(d == c.domain);
  CHECK(r.metric == Metric::Z);
  CHECK(r.window.burn_in == 3);
  CHECK(r.t_star == 0.75);
  REQUIRE(r.states.size() == 2);
  CHECK(r.states[0].u.c == c.state.u.c);
  std::stringstream again;
  write_sample(again, r, d);
  CHECK(again.str() == bytes);
}
