#pragma once

// Reference computations that do not go through the library's own
// discretisation: closed forms, root finders and brute-force loops.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "mprb/attractor.hpp"

namespace oracle {

using ld = long double;
inline constexpr ld kPi = std::numbers::pi_v<long double>;

// Legendre polynomial and first derivative by the three-term recurrence.
inline void legendre(int n, ld x, ld& p, ld& dp) {
  ld p0 = 1, p1 = x;
  if (n == 0) {
    p = 1, dp = 0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const ld p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1, p1 = p2;
  }
  p = p1;
  dp = (std::abs(x) == 1) ? (x > 0 ? 1 : (n % 2 ? 1 : -1)) * ld(n) * (n + 1) / 2 : n * (x * p1 - p0) / (x * x - 1);
}

template <class F>
ld bisect(F f, ld a, ld b) {
  ld fa = f(a);
  for (int it = 0; it < 200; ++it) {
    const ld m = 0.5L * (a + b);
    const ld fm = f(m);
    if ((fm < 0) == (fa < 0))
      a = m, fa = fm;
    else
      b = m;
  }
  return 0.5L * (a + b);
}

// Poloidal eigenvalues of the clamped channel Stokes problem on (0, 1) at
// horizontal wavenumber kappa > 0: lambda = q^2 + kappa^2 where q solves
//   even:  q tan(q/2) = -kappa tanh(kappa/2),   q in ((2m-1) pi, 2m pi)
//   odd:   q cot(q/2) =  kappa coth(kappa/2),   q in (2m pi, (2m+1) pi)
inline std::vector<double> poloidal_dispersion(double kappa, int count) {
  const ld k = kappa;
  const ld se = k * std::tanh(k / 2);
  const ld so = k / std::tanh(k / 2);
  const ld eps = 1e-15L;
  std::vector<double> out;
  for (int m = 1; static_cast<int>(out.size()) < 2 * count; ++m) {
    const ld qe = bisect([&](ld q) { return q * std::tan(q / 2) + se; }, (2 * m - 1) * kPi + eps, 2 * m * kPi);
    const ld qo = bisect([&](ld q) { return q / std::tan(q / 2) - so; }, 2 * m * kPi + eps, (2 * m + 1) * kPi - eps);
    out.push_back(static_cast<double>(qe * qe + k * k));
    out.push_back(static_cast<double>(qo * qo + k * k));
  }
  std::sort(out.begin(), out.end());
  out.resize(count);
  return out;
}

// Real roots of a x^3 + b x + c (a > 0) by bracketing around the stationary
// points of the cubic.
inline std::vector<ld> depressed_cubic_roots(ld a, ld b, ld c) {
  auto f = [&](ld x) { return (a * x * x + b) * x + c; };
  std::vector<ld> r;
  if (b >= 0) return r;
  const ld xs = std::sqrt(-b / (3 * a));
  ld hi = 2 * xs;
  while (f(hi) <= 0) hi *= 2;
  if (f(0) > 0 && f(xs) < 0) r.push_back(bisect(f, 0, xs));
  if (f(xs) < 0) r.push_back(bisect(f, xs, hi));
  return r;
}

// sup_a min_b by the plain double loop, first index on ties.
struct BruteSemidist {
  double value = 0;
  int a = -1, b = -1;
};
inline BruteSemidist brute_semidist(const mprb::Space& sp, const std::vector<mprb::State>& A,
                                    const std::vector<mprb::State>& B, mprb::Metric metric, double M) {
  BruteSemidist out;
  out.value = -1;
  for (std::size_t i = 0; i < A.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = -1;
    for (std::size_t j = 0; j < B.size(); ++j) {
      const double d = mprb::metric_distance(sp, A[i], B[j], metric, M);
      if (d < best) best = d, arg = static_cast<int>(j);
    }
    if (best > out.value) out = {best, static_cast<int>(i), arg};
  }
  return out;
}

}  // namespace oracle
