#include "run_config.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "mprb/errors.hpp"
#include "mprb/io.hpp"

namespace mprb::cli {

const std::vector<KeyInfo>& known_keys() {
  static const std::vector<KeyInfo> keys = {
      {"Ra", nullptr, "Rayleigh number"},
      {"Pr", nullptr, "Prandtl number"},
      {"K", nullptr, "microrotation viscosity ratio nu_r / nu"},
      {"L", nullptr, "scaled angular viscosity alpha"},
      {"M", nullptr, "scaled microinertia"},
      {"G", nullptr, "scaled angular viscosity beta"},
      {"ax", nullptr, "horizontal period in x (channel heights)"},
      {"ay", nullptr, "horizontal period in y (channel heights)"},
      {"nu", nullptr, "kinematic viscosity"},
      {"nu_r", nullptr, "microrotation viscosity"},
      {"rho0", nullptr, "reference density"},
      {"alpha_bar", nullptr, "thermal expansion coefficient"},
      {"g", nullptr, "gravitational acceleration"},
      {"j", nullptr, "microinertia"},
      {"alpha", nullptr, "angular viscosity alpha"},
      {"beta", nullptr, "angular viscosity beta"},
      {"chi", nullptr, "thermal diffusivity"},
      {"T_B", nullptr, "bottom temperature"},
      {"h", nullptr, "channel height"},
      {"Lx1", nullptr, "period in x"},
      {"Lx2", nullptr, "period in y"},
      {"Mv", "32", "vertical Legendre resolution"},
      {"Nh", "4", "largest horizontal wavenumber index"},
      {"Nv", "8", "vertical modes per wavevector and component"},
      {"n_scalar", "0", "retained scalar modes (0 keeps all)"},
      {"n_vector", "0", "retained vector modes (0 keeps all)"},
      {"n_stokes", "0", "retained Stokes modes (0 keeps all)"},
      {"model", "micropolar", "micropolar or newtonian"},
      {"scheme", "cnab2", "euler, cnab2 or oracle"},
      {"dt", "auto", "time step, or auto for the advective CFL estimate"},
      {"horizon", "1", "integration time"},
      {"diag_every", "10", "steps between diagnostics rows"},
      {"oracle_tol", "1e-10", "tolerance of the adaptive oracle"},
      {"init", "random", "zero, random, blob or checkpoint"},
      {"init_radius_u", "1", "L2 radius of random u0"},
      {"init_radius_gamma", "1", "L2 radius of random gamma0"},
      {"init_radius_theta", "1", "L2 radius of random theta0"},
      {"blob_peak", "1.5", "peak initial temperature of the blob"},
      {"blob_width", "0.25", "horizontal e-folding length of the blob"},
      {"init_checkpoint", "", "checkpoint file for init = checkpoint"},
      {"seed", "1", "random seed"},
      {"c1", "0", "Agmon constant (0 calibrates)"},
      {"calibrate_samples", "20", "random draws for the Agmon calibration"},
      {"tol_max_principle", "1e-6", "relative tolerance of the maximum-principle audit"},
      {"tol_theta", "1e-6", "relative tolerance of the theta audit"},
      {"tol_energy", "1e-6", "relative tolerance of the energy audit"},
      {"tol_mean_enstrophy", "1e-6", "relative tolerance of the mean-enstrophy audit"},
      {"tol_ball", "1e-3", "relative tolerance of the enstrophy-ball audit"},
      {"audit_T0", "0", "audits ignore records before this time"},
      {"ens_members", "4", "ensemble size"},
      {"ens_radius_u", "1", "ensemble L2 radius of u"},
      {"ens_radius_gamma", "1", "ensemble L2 radius of gamma"},
      {"ens_radius_theta", "1", "ensemble L2 radius of theta"},
      {"burn_in", "1", "attractor burn-in time"},
      {"window", "1", "attractor sampling window"},
      {"cadence", "0.1", "attractor sampling cadence"},
      {"metric", "X", "X (L2 product) or Z (H1 product)"},
      {"Ks", "", "comma-separated decreasing K list ending at 0"},
      {"name", "run", "run label written into reports"},
      {"cache_dir", "", "basis cache directory (empty disables caching)"},
      {"out", ".", "output directory"},
  };
  return keys;
}

namespace {

const KeyInfo* lookup(const std::string& key) {
  for (const auto& k : known_keys())
    if (key == k.key) return &k;
  return nullptr;
}

double dbl(const KeyValueConfig& c, const char* key) { return c.get_double(key, std::stod(lookup(key)->fallback)); }
long long integer(const KeyValueConfig& c, const char* key) {
  return c.get_int(key, std::stoll(lookup(key)->fallback));
}
std::string str(const KeyValueConfig& c, const char* key) { return c.get_string(key, lookup(key)->fallback); }

}  // namespace

RunConfig resolve(const KeyValueConfig& cfg) {
  for (const auto& [k, v] : cfg.entries())
    if (!lookup(k)) throw ConfigError("unknown configuration key '" + k + "'");

  RunConfig rc;
  rc.source = cfg;
  rc.params = params_from_config(cfg);

  rc.domain.ax = rc.params.ax;
  rc.domain.ay = rc.params.ay;
  rc.domain.Mv = static_cast<int>(integer(cfg, "Mv"));
  rc.domain.Nh = static_cast<int>(integer(cfg, "Nh"));
  rc.domain.Nv = static_cast<int>(integer(cfg, "Nv"));
  rc.domain.n_scalar = static_cast<int>(integer(cfg, "n_scalar"));
  rc.domain.n_vector = static_cast<int>(integer(cfg, "n_vector"));
  rc.domain.n_stokes = static_cast<int>(integer(cfg, "n_stokes"));
  rc.domain.validate();

  rc.model = parse_model(str(cfg, "model"));
  const std::string scheme = str(cfg, "scheme");
  rc.scheme = scheme == "oracle" ? Scheme::oracle_rk78 : parse_scheme(scheme);
  rc.auto_dt = str(cfg, "dt") == "auto";
  rc.dt = rc.auto_dt ? 1e-3 : cfg.get_double("dt");
  rc.horizon = dbl(cfg, "horizon");
  if (!(rc.dt > 0)) throw ConfigError("dt must be positive");
  if (!(rc.horizon > 0)) throw ConfigError("horizon must be positive");
  rc.diag_every = static_cast<int>(integer(cfg, "diag_every"));
  if (rc.diag_every < 1) throw ConfigError("diag_every must be >= 1");
  rc.oracle_tol = dbl(cfg, "oracle_tol");
  if (!(rc.oracle_tol > 0)) throw ConfigError("oracle_tol must be positive");

  rc.init = str(cfg, "init");
  static const std::set<std::string> inits = {"zero", "random", "blob", "checkpoint"};
  if (!inits.count(rc.init)) throw ConfigError("unknown init '" + rc.init + "'");
  rc.init_radius_u = dbl(cfg, "init_radius_u");
  rc.init_radius_gamma = dbl(cfg, "init_radius_gamma");
  rc.init_radius_theta = dbl(cfg, "init_radius_theta");
  rc.blob_peak = dbl(cfg, "blob_peak");
  rc.blob_width = dbl(cfg, "blob_width");
  rc.init_checkpoint = str(cfg, "init_checkpoint");
  if (rc.init == "checkpoint" && rc.init_checkpoint.empty())
    throw ConfigError("init = checkpoint needs init_checkpoint");

  const long long seed = integer(cfg, "seed");
  if (seed < 0) throw ConfigError("seed must be nonnegative");
  rc.seed = static_cast<std::uint64_t>(seed);

  rc.audit.c1 = dbl(cfg, "c1");
  if (rc.audit.c1 < 0) throw ConfigError("c1 must be nonnegative");
  rc.calibrate_samples = static_cast<int>(integer(cfg, "calibrate_samples"));
  if (rc.calibrate_samples < 0) throw ConfigError("calibrate_samples must be nonnegative");
  rc.audit.tol_max_principle = dbl(cfg, "tol_max_principle");
  rc.audit.tol_theta = dbl(cfg, "tol_theta");
  rc.audit.tol_energy = dbl(cfg, "tol_energy");
  rc.audit.tol_mean_enstrophy = dbl(cfg, "tol_mean_enstrophy");
  rc.audit.tol_ball = dbl(cfg, "tol_ball");
  rc.audit.T0 = dbl(cfg, "audit_T0");
  {
    AuditConfig probe = rc.audit;
    probe.c1 = 1;
    probe.validate();
  }

  rc.ensemble.members = static_cast<int>(integer(cfg, "ens_members"));
  rc.ensemble.seed = rc.seed;
  rc.ensemble.radius_u = dbl(cfg, "ens_radius_u");
  rc.ensemble.radius_gamma = dbl(cfg, "ens_radius_gamma");
  rc.ensemble.radius_theta = dbl(cfg, "ens_radius_theta");
  rc.ensemble.validate();

  rc.window.burn_in = dbl(cfg, "burn_in");
  rc.window.window = dbl(cfg, "window");
  rc.window.cadence = dbl(cfg, "cadence");
  rc.window.dt = rc.dt;
  rc.window.scheme = rc.scheme == Scheme::oracle_rk78 ? Scheme::imex_cnab2 : rc.scheme;
  rc.window.validate();
  rc.metric = parse_metric(str(cfg, "metric"));
  if (cfg.has("Ks") && !cfg.raw("Ks").empty()) rc.Ks = cfg.get_double_list("Ks");

  rc.name = str(cfg, "name");
  rc.cache_dir = str(cfg, "cache_dir");
  rc.out_dir = str(cfg, "out");
  return rc;
}

std::string RunConfig::resolved_text() const {
  KeyValueConfig out;
  for (const auto& k : known_keys()) {
    if (source.has(k.key))
      out.set(k.key, source.raw(k.key));
    else if (k.fallback)
      out.set(k.key, k.fallback);
  }
  std::string text = "# effective configuration\n";
  text += "# derived: eps = " + format_double(params.eps) + ", A = " + format_double(params.A) +
          ", D = " + format_double(params.D) + ", Gr = " + format_double(params.Gr) + "\n";
  if (!source.has("Ra")) {
    // Physical input: record the dimensionless constants it produced.
    text += "# derived: Ra = " + format_double(params.Ra) + ", Pr = " + format_double(params.Pr) +
            ", K = " + format_double(params.K) + ", L = " + format_double(params.L) +
            ", M = " + format_double(params.M) + ", G = " + format_double(params.G) +
            ", ax = " + format_double(params.ax) + ", ay = " + format_double(params.ay) + "\n";
  }
  return text + out.to_text();
}

}  // namespace mprb::cli
