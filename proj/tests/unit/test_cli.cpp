#include <doctest.h>

#include "mprb/errors.hpp"
#include "run_config.hpp"

using namespace mprb;
using mprb::cli::resolve;

namespace {

const char* kBase = "Ra = 100\nPr = 10\nK = 0.05\nL = 1\nM = 1\nG = 1\nax = 2\nay = 2\n";

KeyValueConfig base(const std::string& extra = "") { return KeyValueConfig::parse(std::string(kBase) + extra); }

}  // namespace

TEST_CASE("defaults") {
  const auto rc = resolve(base());
  CHECK(rc.domain.Nh == 4);
  CHECK(rc.domain.Mv == 32);
  CHECK(rc.domain.Nv == 8);
  CHECK(rc.domain.ax == 2);
  CHECK(rc.scheme == Scheme::imex_cnab2);
  CHECK(rc.auto_dt);
  CHECK(!resolve(base("dt = 0.002\n")).auto_dt);
  CHECK(rc.audit.c1 == 0);
  CHECK(rc.Ks.empty());
  CHECK(rc.window.scheme == Scheme::imex_cnab2);
}

TEST_CASE("overrides and lists") {
  const auto rc = resolve(base("Nh = 2\nscheme = oracle\nKs = 0.1, 0.05, 0\nmetric = Z\nseed = 9\n"));
  CHECK(rc.domain.Nh == 2);
  CHECK(rc.scheme == Scheme::oracle_rk78);
  CHECK(rc.window.scheme == Scheme::imex_cnab2);
  CHECK(rc.Ks == std::vector<double>{0.1, 0.05, 0.0});
  CHECK(rc.metric == Metric::Z);
  CHECK(rc.ensemble.seed == 9);
}

TEST_CASE("rejections") {
  CHECK_THROWS_AS(resolve(base("Nhh = 2\n")), ConfigError);
  CHECK_THROWS_AS(resolve(base("nu = 1\n")), ConfigError);
  CHECK_THROWS_AS(resolve(base("dt = 0\n")), ConfigError);
  CHECK_THROWS_AS(resolve(base("horizon = -1\n")), ConfigError);
  CHECK_THROWS_AS(resolve(base("init = sphere\n")), ConfigError);
  CHECK_THROWS_AS(resolve(base("init = checkpoint\n")), ConfigError);
  CHECK_THROWS_AS(resolve(base("scheme = rk4\n")), ConfigError);
  CHECK_THROWS_AS(resolve(base("Nv = 99\n")), ConfigError);
  CHECK_THROWS_AS(resolve(base("tol_ball = 0\n")), ConfigError);
  CHECK_THROWS_AS(resolve(KeyValueConfig::parse("Ra = 100\n")), Error);
}

TEST_CASE("resolved text re-parses to the same configuration") {
  const auto rc = resolve(base("Nh = 3\nname = demo\n"));
  const std::string text = rc.resolved_text();
  const auto again = resolve(KeyValueConfig::parse(text));
  CHECK(again.domain == rc.domain);
  CHECK(again.params.eps == rc.params.eps);
  CHECK(again.name == "demo");
  CHECK(again.resolved_text() == text);
  for (const auto& k : cli::known_keys())
    if (k.fallback) CHECK(text.find(std::string("\n") + k.key + " = ") != std::string::npos);
}
