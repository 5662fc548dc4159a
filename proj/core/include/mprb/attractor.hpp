#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mprb/audit.hpp"
#include "mprb/galerkin.hpp"

namespace mprb {

// Initial data drawn from a coefficient-space box: each coefficient is
// U(-1, 1) pi^2 / lambda_i, then the field is rescaled to the given L2 radius.
struct EnsembleSpec {
  int members = 4;
  std::uint64_t seed = 1;
  double radius_u = 1.0;
  double radius_gamma = 1.0;
  double radius_theta = 1.0;

  void validate() const;
};

struct Ensemble {
  EnsembleSpec spec;
  std::vector<State> members;
};

Ensemble make_ensemble(const Space& sp, const EnsembleSpec& spec);
// Member `index` of the ensemble, independent of how many members are drawn.
State ensemble_member(const Space& sp, const EnsembleSpec& spec, int index);

// X: |du| + sqrt(M) |dgamma| + |dtheta| in L2.
// Z: the same sum with H1 seminorms.
enum class Metric : std::uint32_t { X = 0, Z = 1 };
const char* to_string(Metric m);
Metric parse_metric(const std::string& s);

double metric_distance(const Space& sp, const State& a, const State& b, Metric metric, double M);

struct SampleWindow {
  double burn_in = 1.0;
  double window = 1.0;
  double cadence = 0.1;
  double dt = 1e-3;
  Scheme scheme = Scheme::imex_cnab2;

  void validate() const;
};

struct AttractorSample {
  Metric metric = Metric::X;
  SampleWindow window;
  DimensionlessParams params;
  ModelKind model = ModelKind::micropolar;
  std::vector<State> states;
  // Largest over members of the first t >= T1 with V <= R, or -1 if some
  // member never entered the ball during the run.
  double t_star = -1;
  std::vector<std::string> warnings;
};

AttractorSample sample_omega_limit(const GalerkinSystem& sys, const Ensemble& ens, const SampleWindow& w,
                                   Metric metric = Metric::X);

struct SemidistReport {
  double value = 0;
  int index_a = -1;  // attaining pair, first index on ties
  int index_b = -1;
  Metric metric = Metric::X;
};

// sup over a in A of min over b in B. Rows are evaluated in parallel and
// abandon a candidate b once its partial distance exceeds the row minimum,
// which leaves every retained value bit-identical to metric_distance.
SemidistReport hausdorff_semidist(const Space& sp, const AttractorSample& A, const AttractorSample& B);

struct SweepRow {
  double K = 0;
  double dist_X = 0, dist_Z = 0;
  int n_samples = 0;
  double burn_in = 0, window = 0;
  bool refused = false;
  std::string note;
};

// Ks must be strictly decreasing, nonnegative and end at 0. Entries for which
// condition (H) fails with the given c1 are refused and carry no distances.
std::vector<SweepRow> k_sweep(const SpacePtr& sp, const DimensionlessParams& base, const std::vector<double>& Ks,
                              const EnsembleSpec& ens, const SampleWindow& w, double c1);

struct GammaReport {
  double max_gamma = 0;
  double tolerance = 0;
  bool pass = false;
};
GammaReport gamma_on_A0_audit(const AttractorSample& sample, double tolerance = 1e-6);

// Smallest burn-in after which the K = 0 microrotation has decayed by e^-10.
double gamma_decay_burn_in(const DimensionlessParams& dp);

struct ProjectionReport {
  double max_deviation = 0;  // max over steps of |du| + |dtheta|
  double max_step_increment = 0;
  long long steps = 0;
};

// Runs the micropolar model at K = 0 and the standalone Newtonian model from
// the same (u0, theta0) and compares the (u, theta) streams step by step.
ProjectionReport newtonian_projection_compare(const SpacePtr& sp, const DimensionlessParams& dp, const State& s0,
                                              double horizon, double dt, Scheme scheme);

struct ContinuityReport {
  std::vector<double> t, d;
  LogLinearFit fit;
  double exponent = 0;
  double rms_threshold = 0.5;
  bool pass = false;
};

// Integrates s0 and s0 + p with |p|_Z = delta and fits d(t) = d(0) e^{E t}.
ContinuityReport continuous_dependence_probe(const GalerkinSystem& sys, const State& s0, double delta,
                                             double horizon, double dt, Scheme scheme, std::uint64_t seed = 1,
                                             int record_every = 1);

}  // namespace mprb
