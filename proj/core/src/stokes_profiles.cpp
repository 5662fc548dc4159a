#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "mprb/errors.hpp"
#include "mprb/spectral_basis.hpp"

namespace mprb {

std::vector<std::array<double, 4>> shen_legendre(int count, double z) {
  const double s = 2.0 * z - 1.0;
  const auto P = legendre_derivatives(count + 3, 3, s);
  auto L = [&](int n, int k) { return P[static_cast<std::size_t>(n) * 4 + k]; };
  std::vector<std::array<double, 4>> out(count);
  for (int k = 0; k < count; ++k) {
    const double c2 = -2.0 * (2.0 * k + 5.0) / (2.0 * k + 7.0);
    const double c4 = (2.0 * k + 3.0) / (2.0 * k + 7.0);
    double scale = 1.0;
    for (int d = 0; d < 4; ++d) {
      out[k][d] = scale * (L(k, d) + c2 * L(k + 2, d) + c4 * L(k + 4, d));
      scale *= 2.0;
    }
  }
  return out;
}

PoloidalModes solve_poloidal(double k2, int Mv, int n) {
  const int nb = Mv - 3;
  if (nb < n || n < 1) throw BasisError("poloidal Ritz space too small for requested modes");
  const VerticalQuadrature q = gauss_legendre_unit(3 * Mv / 2 + 8);

  // Stiffness  A = int (phi'' - k2 phi)(phi'' - k2 phi)
  // Mass       B = int (phi' phi' + k2 phi phi)
  Eigen::MatrixXd Am = Eigen::MatrixXd::Zero(nb, nb);
  Eigen::MatrixXd Bm = Eigen::MatrixXd::Zero(nb, nb);
  Eigen::VectorXd lap(nb), d1(nb), d0(nb);
  for (int iq = 0; iq < q.size(); ++iq) {
    const auto phi = shen_legendre(nb, q.z[iq]);
    for (int k = 0; k < nb; ++k) {
      d0[k] = phi[k][0];
      d1[k] = phi[k][1];
      lap[k] = phi[k][2] - k2 * phi[k][0];
    }
    Am.noalias() += q.w[iq] * lap * lap.transpose();
    Bm.noalias() += q.w[iq] * (d1 * d1.transpose() + k2 * d0 * d0.transpose());
  }

  // Jacobi scaling keeps the Cholesky factor of A well conditioned.
  Eigen::VectorXd sc = Am.diagonal().cwiseSqrt().cwiseInverse();
  Am = sc.asDiagonal() * Am * sc.asDiagonal();
  Bm = sc.asDiagonal() * Bm * sc.asDiagonal();
  Am = 0.5 * (Am + Am.transpose());
  Bm = 0.5 * (Bm + Bm.transpose());

  // B x = mu A x; the largest mu are the smallest lambda = 1 / mu.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Bm, Am);
  if (es.info() != Eigen::Success) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "Stokes vertical eigensolve failed at |k|^2 = %.17g", k2);
    throw BasisError(buf);
  }

  PoloidalModes out;
  const double kappa = std::sqrt(k2);
  for (int i = 0; i < n; ++i) {
    const int col = nb - 1 - i;
    const double mu = es.eigenvalues()[col];
    if (!(mu > 0)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "nonpositive Stokes eigenvalue at |k|^2 = %.17g", k2);
      throw BasisError(buf);
    }
    // Eigen normalises x^T A x = 1, so x^T B x = mu.
    Eigen::VectorXd x = sc.cwiseProduct(es.eigenvectors().col(col)) * (kappa / std::sqrt(mu));

    // Fix the sign by w''(0) > 0.
    const auto wall = shen_legendre(nb, 0.0);
    double w2 = 0;
    for (int k = 0; k < nb; ++k) w2 += x[k] * wall[k][2];
    if (w2 < 0) x = -x;

    out.eigenvalues.push_back(1.0 / mu);
    out.coeffs.emplace_back(x.data(), x.data() + nb);
  }
  return out;
}

double VerticalProfile::eval(double z, int deriv) const {
  if (kind == ProfileKind::sine) {
    const double q = j * std::numbers::pi;
    const double r2 = std::numbers::sqrt2;
    switch (deriv) {
      case 0: return r2 * std::sin(q * z);
      case 1: return r2 * q * std::cos(q * z);
      case 2: return -r2 * q * q * std::sin(q * z);
      default: return -r2 * q * q * q * std::cos(q * z);
    }
  }
  const auto phi = shen_legendre(static_cast<int>(coeffs.size()), z);
  double v = 0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) v += coeffs[k] * phi[k][deriv];
  return v;
}

}  // namespace mprb
