#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mprb/fields.hpp"
#include "mprb/params.hpp"
#include "mprb/space.hpp"

namespace mprb {

enum class ModelKind : std::uint32_t { micropolar = 0, newtonian = 1 };
enum class Scheme : std::uint32_t { imex_euler = 0, imex_cnab2 = 1, oracle_rk78 = 2 };

const char* to_string(ModelKind m);
const char* to_string(Scheme s);
ModelKind parse_model(const std::string& s);
Scheme parse_scheme(const std::string& s);
int formal_order(Scheme s);

// Quadratic functionals entering the three energy identities.
struct EnergyTerms {
  double grad_u2 = 0;      // |grad u|^2
  double rot_gamma_u = 0;  // (rot gamma, u)
  double theta_u3 = 0;     // (theta, u3)
  double grad_gamma2 = 0;  // |grad gamma|^2
  double div_gamma2 = 0;   // |div gamma|^2
  double gamma2 = 0;       // |gamma|^2
  double grad_theta2 = 0;  // |grad theta|^2
};

// Coefficient-space vectors, one per field.
struct Tendency {
  std::vector<double> u, gamma, theta;
};

// Mass y' = -Lin y + N(y), with Mass = diag(eps, eps M, 1) and, per wavevector,
//   Lin_uu = (1+K) Lambda_S,  Lin_ug = -2K R,  Lin_gu = -2K R^H,
//   Lin_gg = L Lambda_V + G Gdiv + 4K,  Lin_tt = Lambda_T.
// N holds advection, buoyancy Ra theta e3 and the source u3. The Newtonian
// model uses K = 0; gamma then evolves without feeding back into (u, theta).
class GalerkinSystem {
 public:
  GalerkinSystem(SpacePtr space, const DimensionlessParams& dp, ModelKind model);

  const Space& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const DimensionlessParams& params() const { return dp_; }
  ModelKind model() const { return model_; }
  double K() const { return K_; }

  // Full tendencies dy/dt.
  Tendency rhs(const State& s) const;
  // N(y), not divided by the mass.
  Tendency explicit_terms(const State& s) const;
  // Lin y.
  Tendency linear_terms(const State& s) const;

  EnergyTerms energy_terms(const State& s) const;
  std::size_t dimension() const;

  // Advective CFL estimate on the dealiased grid.
  double cfl_dt(const State& s, double safety = 0.5, double dt_max = 1e-2) const;

 private:
  SpacePtr space_;
  DimensionlessParams dp_;
  ModelKind model_;
  double K_;
};

// Fixed-step IMEX integrator; linear terms implicit with one Cholesky
// factorisation per wavevector, nonlinear terms explicit.
class Stepper {
 public:
  Stepper(const GalerkinSystem& sys, double dt, Scheme scheme, double blowup_cap = 1e8);

  // Advances by dt. CNAB2 remembers the previous explicit terms; call reset()
  // before stepping from an unrelated state.
  State step(const State& s);
  void reset() { have_prev_ = false; }
  double dt() const { return dt_; }
  Scheme scheme() const { return scheme_; }

 private:
  struct BlockSolver {
    Eigen::LLT<Eigen::MatrixXcd> ug;  // coupled (u, gamma) or u alone (newtonian)
    Eigen::LLT<Eigen::MatrixXcd> g;   // gamma alone (newtonian)
  };

  State implicit_solve(const State& s, const Tendency& n_star) const;
  void check_blowup(const State& s) const;

  const GalerkinSystem& sys_;
  double dt_;
  Scheme scheme_;
  double c_;
  double cap_;
  std::vector<BlockSolver> solvers_;
  bool have_prev_ = false;
  Tendency prev_;
};

struct StepRecord {
  double t = 0;
  NormSet norms;
  EnergyTerms terms;
  // Cumulative time integrals of the dissipation-minus-source terms of the
  // three identities, when the integrator carries them exactly (oracle).
  bool has_integrals = false;
  std::array<double, 3> integrals{};
};

struct Trajectory {
  std::vector<StepRecord> records;
  std::vector<State> samples;
  double dt = 0;
  Scheme scheme = Scheme::imex_euler;
  ModelKind model = ModelKind::micropolar;
  DimensionlessParams params;  // effective parameters (K = 0 for newtonian)
};

struct IntegrateOptions {
  int diag_every = 1;     // record diagnostics every n steps
  int sample_every = 0;   // keep a State every n steps; 0 keeps only the ends
  double blowup_cap = 1e8;
  std::function<void(const State&, const StepRecord&)> observer;
};

StepRecord make_record(const GalerkinSystem& sys, const State& s);

Trajectory integrate(const GalerkinSystem& sys, const State& s0, double horizon, double dt, Scheme scheme,
                     const IntegrateOptions& opt = {});

// Adaptive Runge-Kutta-Fehlberg 7(8) on the identical right-hand side, with
// the energy integrals appended to the ODE state.
struct OracleOptions {
  double max_dimension = 2000;
  double min_step = 1e-14;
  std::size_t max_steps = 2000000;
  bool keep_samples = false;
};
Trajectory oracle_integrate(const GalerkinSystem& sys, const State& s0, double horizon, double tolerance,
                            const OracleOptions& opt = {});

struct EnergyResiduals {
  double t0 = 0, t1 = 0;
  double r_u = 0, r_gamma = 0, r_theta = 0;
};

// One record per consecutive pair of diagnostics; trapezoidal time
// quadrature unless the trajectory carries exact integrals.
std::vector<EnergyResiduals> energy_residuals(const Trajectory& traj, const DimensionlessParams& dp);

// max over intervals of (|r_u| + |r_gamma| + |r_theta|) / (t1 - t0)
double max_residual_rate(const std::vector<EnergyResiduals>& r);

// State arithmetic helpers.
void axpy(double a, const State& x, State& y);
double state_distance_l2(const State& a, const State& b);

}  // namespace mprb
