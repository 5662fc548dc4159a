#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mprb/spectral_basis.hpp"

namespace mprb {

// Dense separable DFT between the half-plane spectral array
// [(Nh+1) x (2Nh+1)] and an Nx x Ny physical slab (row-major, x outer).
// backward: v(x) = sum over half plane of w_k Re(vhat_k e^{i k.x}), w = 1 at
//           k = 0 and 2 elsewhere
// forward:  vhat_k = mean over grid of v(x) e^{-i k.x}
// The pair is exact for trigonometric polynomials with |m|, |n| <= Nh.
class HorizontalTransform {
 public:
  explicit HorizontalTransform(const DomainSpec& d);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int positions() const { return (nh_ + 1) * width_; }

  void backward(std::span<const cplx> spec, std::span<double> phys) const;
  void forward(std::span<const double> phys, std::span<cplx> spec) const;

  double x(int i) const;
  double y(int j) const;

 private:
  int nh_, width_, nx_, ny_;
  double ax_, ay_;
  std::vector<cplx> ex_;  // [m][x] e^{i kx x}
  std::vector<cplx> ey_;  // [n + Nh][y] e^{i ky y}
};

}  // namespace mprb
