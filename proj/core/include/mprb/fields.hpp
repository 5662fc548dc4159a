#pragma once

#include <vector>

#include "mprb/params.hpp"
#include "mprb/space.hpp"

namespace mprb {

struct Field {
  OperatorKind op = OperatorKind::scalar_laplacian;
  std::vector<double> c;

  bool is_vector() const { return op != OperatorKind::scalar_laplacian; }
};

// u in the Stokes basis, gamma in the vector-Laplacian basis, theta in the
// scalar-Laplacian basis, all on one Space.
struct State {
  double t = 0;
  Field u{OperatorKind::stokes, {}};
  Field gamma{OperatorKind::vector_laplacian, {}};
  Field theta{OperatorKind::scalar_laplacian, {}};
};

struct NormSet {
  double l2_u = 0, l2_gamma = 0, l2_theta = 0;
  double h1_u = 0, h1_gamma = 0, h1_theta = 0;  // H1 seminorms
  double V = 0;                                 // |grad u|^2 + M |grad gamma|^2
  double pos_part = 0;                          // |(T - 1)^+|
  double neg_part = 0;                          // |T^-|
};

Field zero_field(const Space& sp, OperatorKind op);
State zero_state(const Space& sp);
void check_state(const Space& sp, const State& s);

GridField synthesize(const Space& sp, const Field& f);
// L2 projection of grid samples onto the basis `op`.
Field analyze(const Space& sp, const GridField& g, OperatorKind op);

// Component layout: gradient of a scalar has comps (d/dx, d/dy, d/dz);
// gradient of a vector has comps 3 i + j = d_j f_i.
GridField gradient(const Space& sp, const Field& f);
GridField divergence(const Space& sp, const Field& f);
GridField curl(const Space& sp, const Field& f);
GridField laplacian(const Space& sp, const Field& f);
GridField grad_div(const Space& sp, const Field& f);

// Projection of a vector grid field onto the Stokes span (discrete Leray).
Field galerkin_project(const Space& sp, const GridField& v);

// Quadrature inner product over the channel, summed over components.
double grid_inner(const Space& sp, const GridField& a, const GridField& b);
double max_abs(const GridField& g);

double l2_norm(const Field& f);
double h1_seminorm(const Space& sp, const Field& f);
double h2_operator_norm(const Space& sp, const Field& f);  // |Lambda f|

struct TemperatureParts {
  double pos = 0, neg = 0;
};
// |(T - 1)^+| and |T^-| for T = theta + 1 - z, by grid quadrature.
TemperatureParts temperature_parts(const Space& sp, const Field& theta);

// theta for an initial temperature equal to the conduction profile plus a
// smooth blob centred mid-channel, where T reaches `peak_T`. The blob is
// Gaussian in x, y (periodised, e-folding length `width`) and sin^2 in z.
Field temperature_blob(const Space& sp, double peak_T, double width);

NormSet norms(const Space& sp, const State& s, const DimensionlessParams& dp);

}  // namespace mprb
