#include "mprb/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "mprb/errors.hpp"

namespace mprb {

VerticalQuadrature gauss_legendre_unit(int n) {
  if (n < 1) throw ConfigError("quadrature needs at least one node");
  VerticalQuadrature q;
  q.z.resize(n);
  q.w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double s = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = s;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * s * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (s * p1 - p0) / (s * s - 1.0);
      const double ds = p1 / dp;
      s -= ds;
      if (std::abs(ds) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = s;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * s * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (s * p1 - p0) / (s * s - 1.0);
    }
    const double w = 2.0 / ((1.0 - s * s) * dp * dp);
    // s is descending in i; map so z ascends.
    q.z[i] = 0.5 * (1.0 - s);
    q.z[n - 1 - i] = 0.5 * (1.0 + s);
    q.w[i] = q.w[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) q.z[n / 2] = 0.5;
  return q;
}

std::vector<double> legendre_derivatives(int n_max, int k_max, double s) {
  const int stride = k_max + 1;
  std::vector<double> P(static_cast<std::size_t>(n_max + 1) * stride, 0.0);
  auto at = [&](int n, int k) -> double& { return P[static_cast<std::size_t>(n) * stride + k]; };
  at(0, 0) = 1.0;
  if (n_max >= 1) {
    at(1, 0) = s;
    if (k_max >= 1) at(1, 1) = 1.0;
  }
  for (int n = 1; n < n_max; ++n) {
    for (int k = 0; k <= k_max; ++k) {
      const double lower = k > 0 ? at(n, k - 1) : 0.0;
      at(n + 1, k) = ((2.0 * n + 1.0) * (s * at(n, k) + k * lower) - n * at(n - 1, k)) / (n + 1.0);
    }
  }
  return P;
}

}  // namespace mprb
