#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mprb/quadrature.hpp"

namespace mprb {

using cplx = std::complex<double>;

enum class OperatorKind : std::uint32_t { scalar_laplacian = 0, vector_laplacian = 1, stokes = 2 };

const char* to_string(OperatorKind op);

struct DomainSpec {
  double ax = 2.0, ay = 2.0;
  int Mv = 32;  // vertical resolution: polynomial degree of the Stokes Ritz space
  int Nh = 4;   // horizontal cutoff, |m|, |n| <= Nh
  int Nv = 8;   // vertical modes per family and wavevector
  // Truncation counts per operator; 0 keeps every mode.
  int n_scalar = 0, n_vector = 0, n_stokes = 0;

  double area() const { return ax * ay; }
  int quad_points() const { return 3 * Mv / 2 + 8; }
  int grid_x() const { return 3 * Nh + 2; }
  int grid_y() const { return 3 * Nh + 2; }
  int truncation(OperatorKind op) const;
  void validate() const;

  bool operator==(const DomainSpec&) const = default;
};

// Horizontal wavevector (m, n) with k = (2 pi m / ax, 2 pi n / ay). Only the
// half plane m > 0 or (m = 0, n >= 0) is stored; the conjugate half is implied.
struct Wavevector {
  int m = 0, n = 0;
  double kx = 0, ky = 0, k2 = 0;
  int pos = 0;  // index into the (Nh+1) x (2Nh+1) spectral array
};

// Real basis function: trig 0 is the cosine member, trig 1 the sine member.
// comp: vector component (vector basis); toroidal/poloidal or x/y (Stokes).
// j: vertical index, 1-based.
struct ModeDescriptor {
  std::int32_t m = 0, n = 0, trig = 0, comp = 0, j = 0;
  bool operator==(const ModeDescriptor&) const = default;
};

// Half-plane wavevectors ordered by (m, n).
std::vector<Wavevector> horizontal_wavevectors(const DomainSpec& d);

enum class ProfileKind : std::uint32_t { sine = 0, ritz = 1 };

// Vertical profile p(z) and its first three derivatives at the quadrature nodes.
struct VerticalProfile {
  ProfileKind kind = ProfileKind::sine;
  int j = 1;
  double k2 = 0;
  std::vector<double> coeffs;  // Shen-Legendre coefficients (ritz only)
  std::array<std::vector<double>, 4> d;

  double eval(double z, int deriv) const;
};

// One vertical mode at one wavevector. The complex vertical structure is
// psi(z) = a p(z) + b p'(z) (per vector component), and the real cos/sin pair
// is 2 s_k Re[(c_cos - i c_sin) psi(z) e^{i k.x}] with s_k = 1/sqrt(2A).
// At k = 0 the mode is real, s_0 = 1/sqrt(A), and only idx_cos is used.
struct Slot {
  int comp = 0;
  int j = 1;
  int profile = 0;
  double eigenvalue = 0;
  std::array<cplx, 3> a{};
  std::array<cplx, 3> b{};
  int idx_cos = -1;
  int idx_sin = -1;
};

struct Block {
  int wavevector = 0;
  std::vector<Slot> slots;
};

struct EigenBasis {
  OperatorKind op = OperatorKind::scalar_laplacian;
  DomainSpec domain;
  VerticalQuadrature quad;
  std::vector<Wavevector> wavevectors;
  std::vector<Block> blocks;  // parallel to wavevectors
  std::vector<VerticalProfile> profiles;
  std::vector<double> eigenvalues;
  std::vector<ModeDescriptor> modes;
  double gram_deviation = 0;

  std::size_t size() const { return eigenvalues.size(); }
  int components() const { return op == OperatorKind::scalar_laplacian ? 1 : 3; }
  int spectral_positions() const { return (domain.Nh + 1) * (2 * domain.Nh + 1); }
  double scale(const Wavevector& k) const;
};

using BasisPtr = std::shared_ptr<const EigenBasis>;

BasisPtr build_scalar_basis(const DomainSpec& d);
BasisPtr build_vector_basis(const DomainSpec& d);
BasisPtr build_stokes_basis(const DomainSpec& d);
BasisPtr build_basis(OperatorKind op, const DomainSpec& d);

// Lowest n eigenpairs of the clamped fourth-order problem for the wall-normal
// velocity at horizontal wavenumber squared k2, on a Ritz space of
// polynomials of degree <= Mv vanishing with their derivative at both walls.
// Profiles are normalised so that int (w'^2 / k2 + w^2) dz = 1.
struct PoloidalModes {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> coeffs;
};
PoloidalModes solve_poloidal(double k2, int Mv, int n);

// Shen-Legendre function phi_k(s) = L_k - 2(2k+5)/(2k+7) L_{k+2} + (2k+3)/(2k+7) L_{k+4}
// and its z-derivatives (s = 2z - 1) up to order 3, for k = 0..count-1.
std::vector<std::array<double, 4>> shen_legendre(int count, double z);

struct PoincareReport {
  OperatorKind op = OperatorKind::scalar_laplacian;
  double lambda1 = 0;
  double deviation = 0;  // lambda1 - pi^2
  double min_first_order = 0;   // min over samples of |grad v|^2 - pi^2 |v|^2
  double min_second_order = 0;  // min over samples of |Lambda v|^2 - pi^2 |grad v|^2
  int samples = 0;
};

PoincareReport poincare_audit(const EigenBasis& b, int samples, std::uint64_t seed = 1);

// Basis cache. Files are keyed by (operator, DomainSpec) and carry a format
// version; a mismatched header is treated as a miss.
std::string basis_cache_filename(OperatorKind op, const DomainSpec& d);
void write_basis_cache(const EigenBasis& b, const std::string& path);
BasisPtr read_basis_cache(const std::string& path);
// Loads from cache_dir when a valid file exists, otherwise builds and writes it.
BasisPtr load_or_build_basis(OperatorKind op, const DomainSpec& d, const std::string& cache_dir,
                             bool* hit = nullptr);

}  // namespace mprb
