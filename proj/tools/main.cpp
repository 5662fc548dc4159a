#include <CLI11.hpp>
#include <cstdio>
#include <map>

#include "commands.hpp"
#include "mprb/errors.hpp"
#include "mprb/parallel.hpp"

using namespace mprb;

int main(int argc, char** argv) {
  CLI::App app{"Micropolar Rayleigh-Benard spectral Galerkin simulator and estimate auditor", "mprb"};
  app.require_subcommand(1);

  std::string config_path, out_dir, timeseries;
  int threads = 0;
  long long seed = -1;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "configuration file (key = value)");
  app.add_option("--threads", threads, "worker thread cap (results do not depend on it)");
  app.add_option("--seed", seed, "random seed (overrides the config value)");
  app.add_option("--out", out_dir, "output directory (overrides the config value)");
  app.add_option("--set", sets, "KEY=VALUE override, repeatable");

  std::map<std::string, std::string> overrides;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {{"basis", "build and check the three eigenbases"},
                      {"simulate", "integrate and write a time series and final checkpoint"},
                      {"audit", "evaluate the a priori estimates along a trajectory"},
                      {"attractor", "sample an omega-limit set from an ensemble"},
                      {"sweep-k", "semidistances of attractor samples as K decreases to 0"},
                      {"calibrate", "estimate the Agmon constant c1"}};
  std::map<std::string, CLI::App*> cmds;
  for (const auto& s : subs) {
    CLI::App* c = app.add_subcommand(s.name, s.help);
    c->fallthrough();
    c->set_help_flag("--help", "print this help and exit");
    for (const auto& k : cli::known_keys()) {
      const std::string key = k.key;
      if (key == "seed" || key == "out") continue;
      c->add_option_function<std::string>(
           "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; }, k.help)
          ->type_name("VALUE");
    }
    cmds[s.name] = c;
  }
  cmds["audit"]->add_option("--timeseries", timeseries, "audit an existing time-series CSV instead of simulating");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    KeyValueConfig cfg = config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(config_path);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    if (seed >= 0) cfg.set("seed", std::to_string(seed));
    if (!out_dir.empty()) cfg.set("out", out_dir);
    set_thread_count(threads);
    const cli::RunConfig rc = cli::resolve(cfg);

    if (cmds["basis"]->parsed()) return cli::cmd_basis(rc);
    if (cmds["simulate"]->parsed()) return cli::cmd_simulate(rc);
    if (cmds["audit"]->parsed()) return cli::cmd_audit(rc, timeseries);
    if (cmds["attractor"]->parsed()) return cli::cmd_attractor(rc);
    if (cmds["sweep-k"]->parsed()) return cli::cmd_sweep_k(rc);
    return cli::cmd_calibrate(rc);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mprb: error: %s\n", e.what());
    return exit_code_for(e);
  }
}
