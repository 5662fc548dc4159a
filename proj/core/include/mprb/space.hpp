#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mprb/spectral_basis.hpp"
#include "mprb/transforms.hpp"

namespace mprb {

// Complex vertical columns on the quadrature nodes: v[c][q][pos], pos over
// the (Nh+1) x (2Nh+1) spectral array. Entries outside the half plane stay zero.
struct Columns {
  int comps = 0, nq = 0, npos = 0;
  std::vector<cplx> v;

  void resize(int c, int q, int p) {
    comps = c, nq = q, npos = p;
    v.assign(static_cast<std::size_t>(c) * q * p, cplx(0.0));
  }
  cplx* row(int c, int q) { return v.data() + (static_cast<std::size_t>(c) * nq + q) * npos; }
  const cplx* row(int c, int q) const { return v.data() + (static_cast<std::size_t>(c) * nq + q) * npos; }
};

// Physical samples g[c][q][x][y] on the dealiased grid.
struct GridField {
  int comps = 0, nq = 0, nx = 0, ny = 0;
  std::vector<double> v;

  void resize(int c, int q, int x, int y) {
    comps = c, nq = q, nx = x, ny = y;
    v.assign(static_cast<std::size_t>(c) * q * x * y, 0.0);
  }
  std::size_t slab() const { return static_cast<std::size_t>(nx) * ny; }
  double* level(int c, int q) { return v.data() + (static_cast<std::size_t>(c) * nq + q) * slab(); }
  const double* level(int c, int q) const { return v.data() + (static_cast<std::size_t>(c) * nq + q) * slab(); }
};

// Exact per-wavevector couplings between the three bases, in complex
// amplitude form (see Slot).
//   R     = int psi_S^H rot psi_V dz        (Stokes x vector)
//   Btheta= int conj(psi_S,3) psi_T dz      (Stokes x scalar)
//   Gdiv  = int conj(div psi_V) div psi_V dz (vector x vector)
struct BlockCoupling {
  Eigen::MatrixXcd R, Btheta, Gdiv;
};

class Space {
 public:
  static std::shared_ptr<const Space> make(BasisPtr scalar, BasisPtr vector, BasisPtr stokes);
  // Builds (or loads from cache_dir when non-empty) the three bases.
  static std::shared_ptr<const Space> build(const DomainSpec& d, const std::string& cache_dir = "");

  const DomainSpec& domain() const { return domain_; }
  const EigenBasis& basis(OperatorKind op) const;
  const BasisPtr& basis_ptr(OperatorKind op) const;
  const HorizontalTransform& transform() const { return transform_; }
  const std::vector<BlockCoupling>& coupling() const { return coupling_; }
  const VerticalQuadrature& quad() const { return stokes_->quad; }
  int blocks() const { return static_cast<int>(stokes_->blocks.size()); }
  double area() const { return domain_.area(); }
  // Quadrature weight of one grid point, A w_q / (Nx Ny).
  double cell_weight(int q) const;

  // psi^{(deriv)} columns of the field with the given coefficients, scaled
  // to physical amplitude.
  void synth_columns(OperatorKind op, std::span<const double> coeffs, int deriv, Columns& out) const;
  // L2 projection of columns (physical amplitude) onto the basis.
  void project_columns(OperatorKind op, const Columns& in, std::span<double> coeffs) const;

  void columns_to_grid(const Columns& in, GridField& out) const;
  void grid_to_columns(const GridField& in, Columns& out) const;

  // Complex slot amplitudes c_cos - i c_sin of one block, and the inverse.
  Eigen::VectorXcd gather(OperatorKind op, int block, std::span<const double> coeffs) const;
  void scatter(OperatorKind op, int block, const Eigen::VectorXcd& z, std::span<double> coeffs) const;

 private:
  Space(BasisPtr scalar, BasisPtr vector, BasisPtr stokes);

  DomainSpec domain_;
  BasisPtr scalar_, vector_, stokes_;
  HorizontalTransform transform_;
  std::vector<BlockCoupling> coupling_;
};

using SpacePtr = std::shared_ptr<const Space>;

}  // namespace mprb
