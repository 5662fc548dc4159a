#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mprb/config.hpp"
#include "mprb/errors.hpp"
#include "mprb/params.hpp"

using namespace mprb;
using doctest::Approx;

namespace {

PhysicalParams water_like() {
  PhysicalParams p;
  p.nu = 1e-6;
  p.nu_r = 2e-7;
  p.rho0 = 1000;
  p.alpha_bar = 2e-4;
  p.g = 9.81;
  p.j = 1e-8;
  p.alpha = 3e-10;
  p.beta = 1e-10;
  p.chi = 1.4e-7;
  p.T_B = 5;
  p.h = 0.01;
  p.Lx1 = 0.02;
  p.Lx2 = 0.03;
  return p;
}

}  // namespace

TEST_CASE("physical constants map onto the scaled numbers") {
  const PhysicalParams p = water_like();
  const DimensionlessParams d = derive_dimensionless(p);
  CHECK(d.Ra == Approx(p.alpha_bar * p.g * p.T_B * std::pow(p.h, 3) / (p.nu * p.chi)).epsilon(1e-14));
  CHECK(d.Pr == Approx(p.nu / p.chi).epsilon(1e-14));
  CHECK(d.K == Approx(0.2).epsilon(1e-14));
  CHECK(d.L == Approx(p.alpha / (p.h * p.h * p.nu)).epsilon(1e-14));
  CHECK(d.M == Approx(p.j / (p.h * p.h)).epsilon(1e-14));
  CHECK(d.G == Approx(p.beta / (p.h * p.h * p.nu)).epsilon(1e-14));
  CHECK(d.ax == Approx(2.0));
  CHECK(d.ay == Approx(3.0));
  CHECK(d.A == Approx(6.0));
}

TEST_CASE("zero microrotation viscosity gives K = 0") {
  PhysicalParams p = water_like();
  p.nu_r = 0;
  CHECK(derive_dimensionless(p).K == 0.0);
}

TEST_CASE("equal viscosities give K = 1 and N = 1/2") {
  PhysicalParams p = water_like();
  p.nu_r = p.nu;
  const auto d = derive_dimensionless(p);
  CHECK(d.K == 1.0);
  CHECK(d.N() == 0.5);
}

TEST_CASE("Gr Pr = Ra and eps Pr = 1 across random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int i = 0; i < 500; ++i) {
    const double Ra = std::pow(10.0, U(rng) + 3), Pr = std::pow(10.0, U(rng));
    const auto d = DimensionlessParams::make(Ra, Pr, 0.1, 1, 1, 0, 1, 1);
    CHECK(std::abs(d.Gr * d.Pr - Ra) <= 1e-14 * Ra);
    CHECK(std::abs(d.eps * d.Pr - 1.0) <= 1e-14);
  }
}

TEST_CASE("invalid constants are rejected") {
  PhysicalParams p = water_like();
  p.nu = 0;
  CHECK_THROWS_AS(derive_dimensionless(p), ParameterError);
  p = water_like();
  p.nu_r = -1;
  CHECK_THROWS_AS(derive_dimensionless(p), ParameterError);
  p = water_like();
  p.h = -1;
  CHECK_THROWS_AS(derive_dimensionless(p), ParameterError);
  CHECK_THROWS_AS(DimensionlessParams::make(1, 1, 0, 0, 1, 0, 1, 1), ParameterError);
  CHECK_THROWS_AS(DimensionlessParams::make(1, 0, 0, 1, 1, 0, 1, 1), ParameterError);
  CHECK_THROWS_AS(DimensionlessParams::make(1, 1, -0.1, 1, 1, 0, 1, 1), ParameterError);
  CHECK_THROWS_AS(DimensionlessParams::make(1, 1, 0, 1, 1, 0, 0, 1), ParameterError);
}

TEST_CASE("D is max(2, M/L)") {
  CHECK(DimensionlessParams::make(1, 1, 0, 1, 1, 0, 1, 1).D == 2.0);
  CHECK(DimensionlessParams::make(1, 1, 0, 1, 3, 0, 1, 1).D == 3.0);
  CHECK(DimensionlessParams::make(1, 1, 0, 0.5, 1, 0, 1, 1).D == 2.0);
}

TEST_CASE("condition (H) margins") {
  const double c1 = 0.2;
  SUBCASE("K = 0 leaves margin_L = L") {
    const auto h = check_condition_H(DimensionlessParams::make(10, 1000, 0, 0.7, 1, 0, 1, 1), c1);
    CHECK(h.margin_L == 0.7);
  }
  SUBCASE("L = 1, K = 1") {
    const auto h = check_condition_H(DimensionlessParams::make(10, 1000, 1, 1, 1, 0, 1, 1), c1);
    CHECK(h.margin_L == Approx(1.0 - 16.0 / (3.0 * 9.8696044010893586188)).epsilon(1e-14));
    CHECK(h.margin_L == Approx(0.4597).epsilon(1e-4));
  }
  SUBCASE("M/L <= 2 gives the Newtonian threshold with D = 2") {
    const auto d = DimensionlessParams::make(50, 1, 0.1, 1, 1.5, 0, 2, 2);
    CHECK(prandtl_threshold(d, c1) == Approx(2 * c1 * 50 * std::pow(2.0, 1.5) * 2).epsilon(1e-14));
  }
  SUBCASE("satisfied iff both margins are nonnegative") {
    const auto base = DimensionlessParams::make(50, 1, 0.1, 1, 1, 0, 1, 1);
    const double thr = prandtl_threshold(base, c1);
    CHECK_FALSE(check_condition_H(base.with_Pr(0.99 * thr), c1).satisfied);
    CHECK(check_condition_H(base.with_Pr(thr), c1).satisfied);
    CHECK_FALSE(check_condition_H(base.with_Pr(2 * thr).with_K(base.K_max() * 1.01), c1).satisfied);
    CHECK(check_condition_H(base.with_Pr(2 * thr).with_K(base.K_max()), c1).satisfied);
  }
}

TEST_CASE("condition (H) is monotone in Pr and K") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 300; ++i) {
    const auto d = DimensionlessParams::make(1 + 500 * U(rng), 1 + 2000 * U(rng), 2 * U(rng), 0.2 + U(rng),
                                             0.1 + 3 * U(rng), U(rng), 1, 2);
    const double c1 = 0.05 + 0.3 * U(rng);
    const bool h = check_condition_H(d, c1).satisfied;
    if (h) CHECK(check_condition_H(d.with_Pr(d.Pr * (1 + U(rng))), c1).satisfied);
    if (!h) CHECK_FALSE(check_condition_H(d.with_K(d.K * (1 + U(rng))), c1).satisfied);
  }
}

TEST_CASE("background shift") {
  const std::vector<double> z = {0.0, 0.1, 0.5, 0.9, 1.0};
  SUBCASE("conduction profile maps to zero") {
    std::vector<double> T;
    for (double x : z) T.push_back(1.0 - x);
    for (double v : background_shift(T, z)) CHECK(v == 0.0);
  }
  SUBCASE("theta = 0 gives T = 1 at the bottom and 0 at the top") {
    const std::vector<double> theta(z.size(), 0.0);
    const auto T = background_unshift(theta, z);
    CHECK(T.front() == 1.0);
    CHECK(T.back() == 0.0);
  }
  SUBCASE("round trip") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-2, 2);
    std::vector<double> T(z.size());
    for (auto& v : T) v = U(rng);
    const auto back = background_unshift(background_shift(T, z), z);
    for (std::size_t i = 0; i < T.size(); ++i) CHECK(std::abs(back[i] - T[i]) <= 1e-15 * (1 + std::abs(T[i])));
  }
  SUBCASE("length mismatch") {
    const std::vector<double> T(3, 0.0);
    CHECK_THROWS_AS(background_shift(T, z), ConfigError);
  }
}

TEST_CASE("parameter blocks from configuration") {
  SUBCASE("dimensionless block") {
    const auto cfg = KeyValueConfig::parse("Ra = 100\nPr = 10\nK = 0.05\nL = 1\nM = 1\nG = 1\nax = 2\nay = 2\n");
    const auto d = params_from_config(cfg);
    CHECK(d.Ra == 100);
    CHECK(d.A == 4);
  }
  SUBCASE("mixed blocks are rejected") {
    const auto cfg = KeyValueConfig::parse("Ra = 100\nnu = 1\n");
    CHECK_THROWS_AS(params_from_config(cfg), ConfigError);
  }
  SUBCASE("no block") { CHECK_THROWS_AS(params_from_config(KeyValueConfig::parse("Mv = 8")), ConfigError); }
  SUBCASE("physical block") {
    std::string text =
        "nu = 1e-6\nnu_r = 1e-6\nrho0 = 1000\nalpha_bar = 2e-4\ng = 9.81\nj = 1e-8\nalpha = 3e-10\n"
        "beta = 0\nchi = 1.4e-7\nT_B = 5\nh = 0.01\nLx1 = 0.02\nLx2 = 0.02\n";
    const auto d = params_from_config(KeyValueConfig::parse(text));
    CHECK(d.K == 1.0);
    CHECK(d.ax == Approx(2.0));
  }
}

TEST_CASE("key-value configuration syntax") {
  const auto cfg = KeyValueConfig::parse("# header\na = 1.5  # trailing\n\nlist = 1, 0.5 ,0\nname = run one\n");
  CHECK(cfg.get_double("a") == 1.5);
  CHECK(cfg.get_double_list("list") == std::vector<double>{1, 0.5, 0});
  CHECK(cfg.get_string("name", "") == "run one");
  CHECK(cfg.get_int("missing", 7) == 7);
  CHECK_THROWS_AS(KeyValueConfig::parse("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::parse("just words\n"), ConfigError);
  CHECK_THROWS_AS(cfg.get_double("name"), ConfigError);
  CHECK_THROWS_AS(cfg.get_double("absent"), ConfigError);
  const auto again = KeyValueConfig::parse(cfg.to_text());
  CHECK(again.entries() == cfg.entries());
}
