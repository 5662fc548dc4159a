#pragma once

#include <span>
#include <vector>

namespace mprb {

class KeyValueConfig;

struct PhysicalParams {
  double nu = 0;         // kinematic viscosity
  double nu_r = 0;       // microrotation viscosity
  double rho0 = 0;
  double alpha_bar = 0;  // thermal expansion coefficient
  double g = 0;
  double j = 0;          // microinertia
  double alpha = 0;      // angular viscosities alpha, beta
  double beta = 0;
  double chi = 0;        // thermal diffusivity
  double T_B = 0;        // bottom temperature
  double h = 0;          // channel height
  double Lx1 = 0, Lx2 = 0;

  void validate() const;
};

// Scaled model constants. Construct through make() so the derived fields
// (Gr, eps, A, D) always agree with the primary ones.
struct DimensionlessParams {
  double Ra = 0, Pr = 1, Gr = 0, K = 0, L = 1, M = 1, G = 0;
  double eps = 1;
  double ax = 1, ay = 1, A = 1;
  double D = 2;

  static DimensionlessParams make(double Ra, double Pr, double K, double L, double M, double G,
                                  double ax, double ay);

  DimensionlessParams with_K(double K_new) const;
  DimensionlessParams with_Pr(double Pr_new) const;
  DimensionlessParams with_Ra(double Ra_new) const;

  // Microrotation ratio nu_r / (nu + nu_r).
  double N() const { return K / (1.0 + K); }
  // Largest K for which L >= 16 K / (3 pi^2).
  double K_max() const;
};

struct HReport {
  bool satisfied = false;
  double margin_L = 0;
  double margin_Pr = 0;
  double c1_used = 0;
};

DimensionlessParams derive_dimensionless(const PhysicalParams& p);

HReport check_condition_H(const DimensionlessParams& dp, double c1);

// Smallest Prandtl number for which the Pr half of condition (H) holds.
double prandtl_threshold(const DimensionlessParams& dp, double c1);

// theta = T - (1 - z) pointwise; z holds the vertical coordinate of each sample.
std::vector<double> background_shift(std::span<const double> T, std::span<const double> z);
std::vector<double> background_unshift(std::span<const double> theta, std::span<const double> z);

// Reads either the physical block (nu, nu_r, ...) or the dimensionless block
// (Ra, Pr, K, L, M, G, ax, ay); mixing keys from both is rejected.
DimensionlessParams params_from_config(const KeyValueConfig& cfg);

}  // namespace mprb
