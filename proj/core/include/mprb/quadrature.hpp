#pragma once

#include <vector>

namespace mprb {

// Gauss-Legendre rule mapped to (0, 1); nodes ascending.
struct VerticalQuadrature {
  std::vector<double> z;
  std::vector<double> w;
  int size() const { return static_cast<int>(z.size()); }
};

VerticalQuadrature gauss_legendre_unit(int n);

// P_n^{(k)}(s) for n = 0..n_max, k = 0..k_max, returned row-major as
// out[n * (k_max + 1) + k].
std::vector<double> legendre_derivatives(int n_max, int k_max, double s);

}  // namespace mprb
