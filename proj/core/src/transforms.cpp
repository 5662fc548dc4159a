#include "mprb/transforms.hpp"

#include <cmath>
#include <numbers>

namespace mprb {

HorizontalTransform::HorizontalTransform(const DomainSpec& d)
    : nh_(d.Nh), width_(2 * d.Nh + 1), nx_(d.grid_x()), ny_(d.grid_y()), ax_(d.ax), ay_(d.ay) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  ex_.resize(static_cast<std::size_t>(nh_ + 1) * nx_);
  for (int m = 0; m <= nh_; ++m)
    for (int i = 0; i < nx_; ++i) {
      // Reduce the phase index exactly before converting to an angle.
      const double ph = two_pi * static_cast<double>((m * i) % nx_) / nx_;
      ex_[static_cast<std::size_t>(m) * nx_ + i] = {std::cos(ph), std::sin(ph)};
    }
  ey_.resize(static_cast<std::size_t>(width_) * ny_);
  for (int n = -nh_; n <= nh_; ++n)
    for (int j = 0; j < ny_; ++j) {
      const int r = ((n * j) % ny_ + ny_) % ny_;
      const double ph = two_pi * static_cast<double>(r) / ny_;
      ey_[static_cast<std::size_t>(n + nh_) * ny_ + j] = {std::cos(ph), std::sin(ph)};
    }
}

double HorizontalTransform::x(int i) const { return ax_ * i / nx_; }
double HorizontalTransform::y(int j) const { return ay_ * j / ny_; }

void HorizontalTransform::backward(std::span<const cplx> spec, std::span<double> phys) const {
  // g[m][y] = sum_n w * spec[m][n] e^{i ky y}
  std::vector<cplx> g(static_cast<std::size_t>(nh_ + 1) * ny_, cplx(0.0));
  for (int m = 0; m <= nh_; ++m) {
    cplx* gm = &g[static_cast<std::size_t>(m) * ny_];
    for (int n = -nh_; n <= nh_; ++n) {
      if (m == 0 && n < 0) continue;
      const cplx c = spec[static_cast<std::size_t>(m) * width_ + (n + nh_)] * ((m == 0 && n == 0) ? 1.0 : 2.0);
      if (c == cplx(0.0)) continue;
      const cplx* e = &ey_[static_cast<std::size_t>(n + nh_) * ny_];
      for (int j = 0; j < ny_; ++j) gm[j] += c * e[j];
    }
  }
  for (int i = 0; i < nx_; ++i) {
    double* row = &phys[static_cast<std::size_t>(i) * ny_];
    for (int j = 0; j < ny_; ++j) row[j] = 0.0;
    for (int m = 0; m <= nh_; ++m) {
      const cplx e = ex_[static_cast<std::size_t>(m) * nx_ + i];
      const cplx* gm = &g[static_cast<std::size_t>(m) * ny_];
      for (int j = 0; j < ny_; ++j) row[j] += e.real() * gm[j].real() - e.imag() * gm[j].imag();
    }
  }
}

void HorizontalTransform::forward(std::span<const double> phys, std::span<cplx> spec) const {
  // h[m][y] = sum_x v e^{-i kx x}
  std::vector<cplx> h(static_cast<std::size_t>(nh_ + 1) * ny_, cplx(0.0));
  for (int m = 0; m <= nh_; ++m) {
    cplx* hm = &h[static_cast<std::size_t>(m) * ny_];
    for (int i = 0; i < nx_; ++i) {
      const cplx e = std::conj(ex_[static_cast<std::size_t>(m) * nx_ + i]);
      const double* row = &phys[static_cast<std::size_t>(i) * ny_];
      for (int j = 0; j < ny_; ++j) hm[j] += e * row[j];
    }
  }
  const double inv = 1.0 / (static_cast<double>(nx_) * ny_);
  for (int m = 0; m <= nh_; ++m) {
    const cplx* hm = &h[static_cast<std::size_t>(m) * ny_];
    for (int n = -nh_; n <= nh_; ++n) {
      cplx& out = spec[static_cast<std::size_t>(m) * width_ + (n + nh_)];
      if (m == 0 && n < 0) {
        out = 0.0;
        continue;
      }
      const cplx* e = &ey_[static_cast<std::size_t>(n + nh_) * ny_];
      cplx acc = 0.0;
      for (int j = 0; j < ny_; ++j) acc += hm[j] * std::conj(e[j]);
      out = acc * inv;
    }
  }
}

}  // namespace mprb
