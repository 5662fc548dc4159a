#include "mprb/space.hpp"

#include <cmath>

#include "mprb/errors.hpp"

namespace mprb {

namespace {

struct SlotColumn {
  std::vector<cplx> v[3];  // psi_c(z_q)
  std::vector<cplx> dz[3];  // psi_c'(z_q)
};

SlotColumn evaluate_slot(const EigenBasis& b, const Slot& s) {
  const auto& p = b.profiles[s.profile];
  const int nq = b.quad.size();
  SlotColumn out;
  for (int c = 0; c < 3; ++c) {
    out.v[c].resize(nq);
    out.dz[c].resize(nq);
    for (int q = 0; q < nq; ++q) {
      out.v[c][q] = s.a[c] * p.d[0][q] + s.b[c] * p.d[1][q];
      out.dz[c][q] = s.a[c] * p.d[1][q] + s.b[c] * p.d[2][q];
    }
  }
  return out;
}

}  // namespace

Space::Space(BasisPtr scalar, BasisPtr vector, BasisPtr stokes)
    : domain_(stokes->domain),
      scalar_(std::move(scalar)),
      vector_(std::move(vector)),
      stokes_(std::move(stokes)),
      transform_(domain_) {}

std::shared_ptr<const Space> Space::make(BasisPtr scalar, BasisPtr vector, BasisPtr stokes) {
  if (!scalar || !vector || !stokes) throw ConfigError("Space needs all three bases");
  if (scalar->op != OperatorKind::scalar_laplacian || vector->op != OperatorKind::vector_laplacian ||
      stokes->op != OperatorKind::stokes)
    throw ConfigError("Space bases have the wrong operator tags");
  if (!(scalar->domain == stokes->domain) || !(vector->domain == stokes->domain))
    throw ConfigError("Space bases were built on different domains");

  std::shared_ptr<Space> sp(new Space(std::move(scalar), std::move(vector), std::move(stokes)));
  const auto& S = *sp->stokes_;
  const auto& V = *sp->vector_;
  const auto& T = *sp->scalar_;
  const auto& w = S.quad.w;
  const int nq = S.quad.size();
  sp->coupling_.resize(S.blocks.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(S.blocks.size()); ++bi) {
    const auto& k = S.wavevectors[bi];
    const cplx ikx(0.0, k.kx), iky(0.0, k.ky);
    const auto& ss = S.blocks[bi].slots;
    const auto& vs = V.blocks[bi].slots;
    const auto& ts = T.blocks[bi].slots;

    std::vector<SlotColumn> cs, cv, ct;
    for (const auto& s : ss) cs.push_back(evaluate_slot(S, s));
    for (const auto& s : vs) cv.push_back(evaluate_slot(V, s));
    for (const auto& s : ts) ct.push_back(evaluate_slot(T, s));

    // rot and div of each vector slot
    std::vector<std::array<std::vector<cplx>, 3>> rot(vs.size());
    std::vector<std::vector<cplx>> div(vs.size());
    for (std::size_t t = 0; t < vs.size(); ++t) {
      const auto& g = cv[t];
      for (auto& r : rot[t]) r.resize(nq);
      div[t].resize(nq);
      for (int q = 0; q < nq; ++q) {
        rot[t][0][q] = iky * g.v[2][q] - g.dz[1][q];
        rot[t][1][q] = g.dz[0][q] - ikx * g.v[2][q];
        rot[t][2][q] = ikx * g.v[1][q] - iky * g.v[0][q];
        div[t][q] = ikx * g.v[0][q] + iky * g.v[1][q] + g.dz[2][q];
      }
    }

    auto& cp = sp->coupling_[bi];
    cp.R = Eigen::MatrixXcd::Zero(ss.size(), vs.size());
    cp.Btheta = Eigen::MatrixXcd::Zero(ss.size(), ts.size());
    cp.Gdiv = Eigen::MatrixXcd::Zero(vs.size(), vs.size());
    for (std::size_t s = 0; s < ss.size(); ++s) {
      for (std::size_t t = 0; t < vs.size(); ++t) {
        cplx acc = 0;
        for (int q = 0; q < nq; ++q)
          for (int c = 0; c < 3; ++c) acc += w[q] * std::conj(cs[s].v[c][q]) * rot[t][c][q];
        cp.R(s, t) = acc;
      }
      for (std::size_t t = 0; t < ts.size(); ++t) {
        cplx acc = 0;
        for (int q = 0; q < nq; ++q) acc += w[q] * std::conj(cs[s].v[2][q]) * ct[t].v[0][q];
        cp.Btheta(s, t) = acc;
      }
    }
    for (std::size_t s = 0; s < vs.size(); ++s) {
      for (std::size_t t = s; t < vs.size(); ++t) {
        cplx acc = 0;
        for (int q = 0; q < nq; ++q) acc += w[q] * std::conj(div[s][q]) * div[t][q];
        cp.Gdiv(s, t) = acc;
        cp.Gdiv(t, s) = std::conj(acc);
      }
    }
    // Hermitian diagonal exactly real.
    for (std::size_t s = 0; s < vs.size(); ++s) cp.Gdiv(s, s) = cp.Gdiv(s, s).real();
  }
  return sp;
}

std::shared_ptr<const Space> Space::build(const DomainSpec& d, const std::string& cache_dir) {
  if (cache_dir.empty())
    return make(build_scalar_basis(d), build_vector_basis(d), build_stokes_basis(d));
  return make(load_or_build_basis(OperatorKind::scalar_laplacian, d, cache_dir),
              load_or_build_basis(OperatorKind::vector_laplacian, d, cache_dir),
              load_or_build_basis(OperatorKind::stokes, d, cache_dir));
}

const EigenBasis& Space::basis(OperatorKind op) const { return *basis_ptr(op); }

const BasisPtr& Space::basis_ptr(OperatorKind op) const {
  switch (op) {
    case OperatorKind::scalar_laplacian: return scalar_;
    case OperatorKind::vector_laplacian: return vector_;
    case OperatorKind::stokes: return stokes_;
  }
  throw ConfigError("unknown operator kind");
}

double Space::cell_weight(int q) const {
  return domain_.area() * quad().w[q] / (static_cast<double>(transform_.nx()) * transform_.ny());
}

void Space::synth_columns(OperatorKind op, std::span<const double> coeffs, int deriv, Columns& out) const {
  const auto& b = basis(op);
  if (coeffs.size() != b.size()) throw ConfigError("coefficient length does not match the basis");
  if (deriv < 0 || deriv > 2) throw ConfigError("synth_columns supports derivatives up to order 2");
  const int nq = b.quad.size();
  const int comps = b.components();
  out.resize(comps, nq, b.spectral_positions());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(b.blocks.size()); ++bi) {
    const auto& k = b.wavevectors[bi];
    const double sk = b.scale(k);
    for (const auto& s : b.blocks[bi].slots) {
      const cplx z = sk * cplx(coeffs[s.idx_cos], s.idx_sin >= 0 ? -coeffs[s.idx_sin] : 0.0);
      if (z == cplx(0.0)) continue;
      const auto& p = b.profiles[s.profile];
      for (int c = 0; c < comps; ++c) {
        const cplx za = z * s.a[c], zb = z * s.b[c];
        if (za == cplx(0.0) && zb == cplx(0.0)) continue;
        const double* p0 = p.d[deriv].data();
        const double* p1 = p.d[deriv + 1].data();
        for (int q = 0; q < nq; ++q) out.row(c, q)[k.pos] += za * p0[q] + zb * p1[q];
      }
    }
  }
}

void Space::project_columns(OperatorKind op, const Columns& in, std::span<double> coeffs) const {
  const auto& b = basis(op);
  if (coeffs.size() != b.size()) throw ConfigError("coefficient length does not match the basis");
  if (in.comps != b.components() || in.nq != b.quad.size() || in.npos != b.spectral_positions())
    throw ConfigError("column layout does not match the basis");
  const int nq = b.quad.size();
  const auto& w = b.quad.w;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t bi = 0; bi < static_cast<std::ptrdiff_t>(b.blocks.size()); ++bi) {
    const auto& k = b.wavevectors[bi];
    const double inv_sk = 1.0 / b.scale(k);
    for (const auto& s : b.blocks[bi].slots) {
      const auto& p = b.profiles[s.profile];
      cplx acc = 0;
      for (int c = 0; c < in.comps; ++c) {
        const cplx ca = std::conj(s.a[c]), cb = std::conj(s.b[c]);
        if (ca == cplx(0.0) && cb == cplx(0.0)) continue;
        for (int q = 0; q < nq; ++q) acc += w[q] * (ca * p.d[0][q] + cb * p.d[1][q]) * in.row(c, q)[k.pos];
      }
      acc *= inv_sk;
      coeffs[s.idx_cos] = acc.real();
      if (s.idx_sin >= 0) coeffs[s.idx_sin] = -acc.imag();
    }
  }
}

void Space::columns_to_grid(const Columns& in, GridField& out) const {
  out.resize(in.comps, in.nq, transform_.nx(), transform_.ny());
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(in.comps) * in.nq;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const int c = static_cast<int>(i / in.nq), q = static_cast<int>(i % in.nq);
    transform_.backward({in.row(c, q), static_cast<std::size_t>(in.npos)}, {out.level(c, q), out.slab()});
  }
}

void Space::grid_to_columns(const GridField& in, Columns& out) const {
  out.resize(in.comps, in.nq, transform_.positions());
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(in.comps) * in.nq;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const int c = static_cast<int>(i / in.nq), q = static_cast<int>(i % in.nq);
    transform_.forward({in.level(c, q), in.slab()}, {out.row(c, q), static_cast<std::size_t>(out.npos)});
  }
}

Eigen::VectorXcd Space::gather(OperatorKind op, int block, std::span<const double> coeffs) const {
  const auto& slots = basis(op).blocks[block].slots;
  Eigen::VectorXcd z(slots.size());
  for (std::size_t s = 0; s < slots.size(); ++s)
    z[s] = cplx(coeffs[slots[s].idx_cos], slots[s].idx_sin >= 0 ? -coeffs[slots[s].idx_sin] : 0.0);
  return z;
}

void Space::scatter(OperatorKind op, int block, const Eigen::VectorXcd& z, std::span<double> coeffs) const {
  const auto& slots = basis(op).blocks[block].slots;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    coeffs[slots[s].idx_cos] = z[s].real();
    if (slots[s].idx_sin >= 0) coeffs[slots[s].idx_sin] = -z[s].imag();
  }
}

}  // namespace mprb
