#include "mprb/params.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "mprb/config.hpp"
#include "mprb/errors.hpp"

namespace mprb {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v))
    throw ParameterError(std::string(name) + " must be positive and finite, got " + std::to_string(v));
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0) || !std::isfinite(v))
    throw ParameterError(std::string(name) + " must be nonnegative and finite, got " + std::to_string(v));
}

constexpr std::array<const char*, 13> kPhysicalKeys = {
    "nu", "nu_r", "rho0", "alpha_bar", "g", "j", "alpha", "beta", "chi", "T_B", "h", "Lx1", "Lx2"};
constexpr std::array<const char*, 8> kDimensionlessKeys = {"Ra", "Pr", "K", "L", "M", "G", "ax", "ay"};

}  // namespace

void PhysicalParams::validate() const {
  require_positive(nu, "nu");
  require_nonnegative(nu_r, "nu_r");
  require_positive(rho0, "rho0");
  require_positive(alpha_bar, "alpha_bar");
  require_positive(g, "g");
  require_positive(j, "j");
  require_positive(alpha, "alpha");
  require_nonnegative(beta, "beta");
  require_positive(chi, "chi");
  require_positive(T_B, "T_B");
  require_positive(h, "h");
  require_positive(Lx1, "Lx1");
  require_positive(Lx2, "Lx2");
}

DimensionlessParams DimensionlessParams::make(double Ra, double Pr, double K, double L, double M,
                                              double G, double ax, double ay) {
  require_nonnegative(Ra, "Ra");
  require_positive(Pr, "Pr");
  require_nonnegative(K, "K");
  require_positive(L, "L");
  require_positive(M, "M");
  require_nonnegative(G, "G");
  require_positive(ax, "ax");
  require_positive(ay, "ay");

  DimensionlessParams d;
  d.Ra = Ra;
  d.Pr = Pr;
  d.Gr = Ra / Pr;
  d.eps = 1.0 / Pr;
  d.K = K;
  d.L = L;
  d.M = M;
  d.G = G;
  d.ax = ax;
  d.ay = ay;
  d.A = ax * ay;
  d.D = std::max(2.0, M / L);
  return d;
}

DimensionlessParams DimensionlessParams::with_K(double K_new) const {
  return make(Ra, Pr, K_new, L, M, G, ax, ay);
}

DimensionlessParams DimensionlessParams::with_Pr(double Pr_new) const {
  return make(Ra, Pr_new, K, L, M, G, ax, ay);
}

DimensionlessParams DimensionlessParams::with_Ra(double Ra_new) const {
  return make(Ra_new, Pr, K, L, M, G, ax, ay);
}

double DimensionlessParams::K_max() const {
  return 3.0 * std::numbers::pi * std::numbers::pi * L / 16.0;
}

DimensionlessParams derive_dimensionless(const PhysicalParams& p) {
  p.validate();
  const double h2 = p.h * p.h;
  const double Ra = p.alpha_bar * p.g * p.T_B * p.h * h2 / (p.nu * p.chi);
  return DimensionlessParams::make(Ra, p.nu / p.chi, p.nu_r / p.nu, p.alpha / (h2 * p.nu), p.j / h2,
                                   p.beta / (h2 * p.nu), p.Lx1 / p.h, p.Lx2 / p.h);
}

HReport check_condition_H(const DimensionlessParams& dp, double c1) {
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  HReport r;
  r.c1_used = c1;
  r.margin_L = dp.L - 16.0 / (3.0 * pi2) * dp.K;
  r.margin_Pr = dp.Pr - prandtl_threshold(dp, c1);
  r.satisfied = r.margin_L >= 0 && r.margin_Pr >= 0;
  return r;
}

double prandtl_threshold(const DimensionlessParams& dp, double c1) {
  return 2.0 * c1 * dp.Ra * std::pow(dp.D, 1.5) * std::sqrt(dp.A);
}

std::vector<double> background_shift(std::span<const double> T, std::span<const double> z) {
  if (T.size() != z.size()) throw ConfigError("background_shift: field and coordinate sizes differ");
  std::vector<double> out(T.size());
  for (std::size_t i = 0; i < T.size(); ++i) out[i] = T[i] - (1.0 - z[i]);
  return out;
}

std::vector<double> background_unshift(std::span<const double> theta, std::span<const double> z) {
  if (theta.size() != z.size()) throw ConfigError("background_unshift: field and coordinate sizes differ");
  std::vector<double> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) out[i] = theta[i] + (1.0 - z[i]);
  return out;
}

DimensionlessParams params_from_config(const KeyValueConfig& cfg) {
  const bool any_phys = std::any_of(kPhysicalKeys.begin(), kPhysicalKeys.end(),
                                    [&](const char* k) { return cfg.has(k); });
  const bool any_dim = std::any_of(kDimensionlessKeys.begin(), kDimensionlessKeys.end(),
                                   [&](const char* k) { return cfg.has(k); });
  if (any_phys && any_dim)
    throw ConfigError("configuration mixes physical and dimensionless parameter blocks");
  if (!any_phys && !any_dim) throw ConfigError("configuration has no parameter block");

  if (any_phys) {
    PhysicalParams p;
    p.nu = cfg.get_double("nu");
    p.nu_r = cfg.get_double("nu_r");
    p.rho0 = cfg.get_double("rho0");
    p.alpha_bar = cfg.get_double("alpha_bar");
    p.g = cfg.get_double("g");
    p.j = cfg.get_double("j");
    p.alpha = cfg.get_double("alpha");
    p.beta = cfg.get_double("beta");
    p.chi = cfg.get_double("chi");
    p.T_B = cfg.get_double("T_B");
    p.h = cfg.get_double("h");
    p.Lx1 = cfg.get_double("Lx1");
    p.Lx2 = cfg.get_double("Lx2");
    return derive_dimensionless(p);
  }
  return DimensionlessParams::make(cfg.get_double("Ra"), cfg.get_double("Pr"), cfg.get_double("K"),
                                   cfg.get_double("L"), cfg.get_double("M"), cfg.get_double("G"),
                                   cfg.get_double("ax"), cfg.get_double("ay"));
}

}  // namespace mprb
