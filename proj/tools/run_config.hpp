#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mprb/attractor.hpp"
#include "mprb/audit.hpp"
#include "mprb/config.hpp"
#include "mprb/galerkin.hpp"

namespace mprb::cli {

struct KeyInfo {
  const char* key;
  const char* fallback;  // nullptr: no default (parameter block keys)
  const char* help;
};

// Every key a run configuration may contain, in sidecar order.
const std::vector<KeyInfo>& known_keys();

struct RunConfig {
  KeyValueConfig source;  // file values with command-line overrides applied

  DomainSpec domain;
  DimensionlessParams params;
  ModelKind model = ModelKind::micropolar;
  Scheme scheme = Scheme::imex_cnab2;
  double dt = 1e-3;
  bool auto_dt = false;  // dt = auto: advective CFL estimate from the initial state
  double horizon = 1.0;
  int diag_every = 10;
  double oracle_tol = 1e-10;

  std::string init = "random";
  double init_radius_u = 1, init_radius_gamma = 1, init_radius_theta = 1;
  double blob_peak = 1.5, blob_width = 0.25;
  std::string init_checkpoint;

  std::uint64_t seed = 1;
  AuditConfig audit;  // audit.c1 == 0 means "calibrate"
  int calibrate_samples = 20;

  EnsembleSpec ensemble;
  SampleWindow window;
  Metric metric = Metric::X;
  std::vector<double> Ks;

  std::string name = "run";
  std::string cache_dir;
  std::string out_dir = ".";

  // Every effective value, defaults included, in config syntax.
  std::string resolved_text() const;
};

// Rejects unknown keys, applies defaults and validates the result.
RunConfig resolve(const KeyValueConfig& cfg);

}  // namespace mprb::cli
