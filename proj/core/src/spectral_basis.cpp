#include "mprb/spectral_basis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <limits>
#include <tuple>

#include "mprb/errors.hpp"

namespace mprb {

namespace {

constexpr double kPi = std::numbers::pi;

struct Candidate {
  double eigenvalue;
  int j, m, n, comp, trig;
  int block, slot;
};

}  // namespace

std::vector<Wavevector> horizontal_wavevectors(const DomainSpec& d) {
  std::vector<Wavevector> out;
  const int width = 2 * d.Nh + 1;
  for (int m = 0; m <= d.Nh; ++m) {
    for (int n = -d.Nh; n <= d.Nh; ++n) {
      if (m == 0 && n < 0) continue;
      Wavevector k;
      k.m = m;
      k.n = n;
      k.kx = 2.0 * kPi * m / d.ax;
      k.ky = 2.0 * kPi * n / d.ay;
      k.k2 = k.kx * k.kx + k.ky * k.ky;
      k.pos = m * width + (n + d.Nh);
      out.push_back(k);
    }
  }
  return out;
}

namespace {

VerticalProfile sine_profile(int j, const VerticalQuadrature& q) {
  VerticalProfile p;
  p.kind = ProfileKind::sine;
  p.j = j;
  for (int d = 0; d < 4; ++d) {
    p.d[d].resize(q.size());
    for (int i = 0; i < q.size(); ++i) p.d[d][i] = p.eval(q.z[i], d);
  }
  return p;
}

VerticalProfile ritz_profile(int j, double k2, std::vector<double> coeffs, const VerticalQuadrature& q) {
  VerticalProfile p;
  p.kind = ProfileKind::ritz;
  p.j = j;
  p.k2 = k2;
  p.coeffs = std::move(coeffs);
  const int nb = static_cast<int>(p.coeffs.size());
  for (int d = 0; d < 4; ++d) p.d[d].assign(q.size(), 0.0);
  for (int i = 0; i < q.size(); ++i) {
    const auto phi = shen_legendre(nb, q.z[i]);
    for (int d = 0; d < 4; ++d) {
      double v = 0;
      for (int k = 0; k < nb; ++k) v += p.coeffs[k] * phi[k][d];
      p.d[d][i] = v;
    }
  }
  return p;
}

cplx slot_value(const EigenBasis& b, const Slot& s, int c, int iq, int deriv) {
  const auto& p = b.profiles[s.profile];
  cplx v = s.a[c] * p.d[deriv][iq];
  if (s.b[c] != cplx(0.0) && deriv < 3) v += s.b[c] * p.d[deriv + 1][iq];
  return v;
}

// Sorts every (slot, trig) member, truncates without splitting a cos/sin
// pair, assigns global indices, and drops slots that fell off the end.
void order_and_truncate(EigenBasis& b) {
  std::vector<Candidate> cand;
  for (int bi = 0; bi < static_cast<int>(b.blocks.size()); ++bi) {
    const auto& k = b.wavevectors[bi];
    const auto& slots = b.blocks[bi].slots;
    for (int si = 0; si < static_cast<int>(slots.size()); ++si) {
      const int ntrig = (k.m == 0 && k.n == 0) ? 1 : 2;
      for (int t = 0; t < ntrig; ++t)
        cand.push_back({slots[si].eigenvalue, slots[si].j, k.m, k.n, slots[si].comp, t, bi, si});
    }
  }
  std::sort(cand.begin(), cand.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.eigenvalue, x.j, x.m, x.n, x.comp, x.trig) <
           std::tie(y.eigenvalue, y.j, y.m, y.n, y.comp, y.trig);
  });

  const int requested = b.domain.truncation(b.op);
  std::size_t keep = cand.size();
  if (requested > 0) {
    if (static_cast<std::size_t>(requested) > cand.size())
      throw ConfigError(std::string("requested ") + std::to_string(requested) + " " + to_string(b.op) +
                        " modes but only " + std::to_string(cand.size()) + " are available");
    keep = static_cast<std::size_t>(requested);
    if (keep < cand.size() && keep > 0 && cand[keep - 1].trig == 0 && cand[keep].trig == 1 &&
        cand[keep].block == cand[keep - 1].block && cand[keep].slot == cand[keep - 1].slot)
      --keep;
    if (keep == 0) throw ConfigError("truncation leaves an empty basis");
  }

  b.eigenvalues.resize(keep);
  b.modes.resize(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    const auto& c = cand[i];
    b.eigenvalues[i] = c.eigenvalue;
    b.modes[i] = {c.m, c.n, c.trig, c.comp, c.j};
    auto& s = b.blocks[c.block].slots[c.slot];
    (c.trig == 0 ? s.idx_cos : s.idx_sin) = static_cast<int>(i);
  }
  for (auto& blk : b.blocks) {
    std::erase_if(blk.slots, [](const Slot& s) { return s.idx_cos < 0; });
  }
}

double compute_gram_deviation(const EigenBasis& b) {
  double dev = 0;
  const int nq = b.quad.size();
  for (const auto& blk : b.blocks) {
    const auto& slots = blk.slots;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      for (std::size_t t = s; t < slots.size(); ++t) {
        cplx g = 0;
        for (int iq = 0; iq < nq; ++iq) {
          for (int c = 0; c < b.components(); ++c)
            g += b.quad.w[iq] * std::conj(slot_value(b, slots[s], c, iq, 0)) * slot_value(b, slots[t], c, iq, 0);
        }
        dev = std::max(dev, std::abs(g - (s == t ? cplx(1.0) : cplx(0.0))));
      }
    }
  }
  return dev;
}

std::shared_ptr<EigenBasis> skeleton(OperatorKind op, const DomainSpec& d) {
  d.validate();
  auto b = std::make_shared<EigenBasis>();
  b->op = op;
  b->domain = d;
  b->quad = gauss_legendre_unit(d.quad_points());
  b->wavevectors = horizontal_wavevectors(d);
  b->blocks.resize(b->wavevectors.size());
  for (std::size_t i = 0; i < b->blocks.size(); ++i) b->blocks[i].wavevector = static_cast<int>(i);
  for (int j = 1; j <= d.Nv; ++j) b->profiles.push_back(sine_profile(j, b->quad));
  return b;
}

BasisPtr finish(std::shared_ptr<EigenBasis> b) {
  order_and_truncate(*b);
  b->gram_deviation = compute_gram_deviation(*b);
  return b;
}

}  // namespace

const char* to_string(OperatorKind op) {
  switch (op) {
    case OperatorKind::scalar_laplacian: return "scalar-laplacian";
    case OperatorKind::vector_laplacian: return "vector-laplacian";
    case OperatorKind::stokes: return "stokes";
  }
  return "?";
}

int DomainSpec::truncation(OperatorKind op) const {
  switch (op) {
    case OperatorKind::scalar_laplacian: return n_scalar;
    case OperatorKind::vector_laplacian: return n_vector;
    case OperatorKind::stokes: return n_stokes;
  }
  return 0;
}

void DomainSpec::validate() const {
  if (!(ax > 0) || !(ay > 0) || !std::isfinite(ax) || !std::isfinite(ay))
    throw ConfigError("horizontal periods must be positive");
  if (Mv < 8) throw ConfigError("Mv must be at least 8");
  if (Nh < 1) throw ConfigError("Nh must be at least 1");
  if (Nv < 1) throw ConfigError("Nv must be at least 1");
  if (4 * Nv > Mv) throw ConfigError("Nv must not exceed Mv / 4");
  if (n_scalar < 0 || n_vector < 0 || n_stokes < 0) throw ConfigError("truncation counts must be >= 0");
}

double EigenBasis::scale(const Wavevector& k) const {
  const double A = domain.area();
  return (k.m == 0 && k.n == 0) ? 1.0 / std::sqrt(A) : 1.0 / std::sqrt(2.0 * A);
}

BasisPtr build_scalar_basis(const DomainSpec& d) {
  auto b = skeleton(OperatorKind::scalar_laplacian, d);
  for (std::size_t bi = 0; bi < b->blocks.size(); ++bi) {
    const auto& k = b->wavevectors[bi];
    for (int j = 1; j <= d.Nv; ++j) {
      Slot s;
      s.comp = 0;
      s.j = j;
      s.profile = j - 1;
      s.eigenvalue = k.k2 + (j * kPi) * (j * kPi);
      s.a = {1.0, 0.0, 0.0};
      b->blocks[bi].slots.push_back(s);
    }
  }
  return finish(b);
}

BasisPtr build_vector_basis(const DomainSpec& d) {
  auto b = skeleton(OperatorKind::vector_laplacian, d);
  for (std::size_t bi = 0; bi < b->blocks.size(); ++bi) {
    const auto& k = b->wavevectors[bi];
    for (int j = 1; j <= d.Nv; ++j) {
      for (int c = 0; c < 3; ++c) {
        Slot s;
        s.comp = c;
        s.j = j;
        s.profile = j - 1;
        s.eigenvalue = k.k2 + (j * kPi) * (j * kPi);
        s.a[c] = 1.0;
        b->blocks[bi].slots.push_back(s);
      }
    }
  }
  return finish(b);
}

BasisPtr build_stokes_basis(const DomainSpec& d) {
  auto b = skeleton(OperatorKind::stokes, d);

  // One Ritz solve per distinct |k|^2 so degenerate wavevectors share
  // bit-identical eigenvalues.
  std::map<double, int> k2_index;
  for (const auto& k : b->wavevectors)
    if (k.k2 > 0) k2_index.emplace(k.k2, 0);
  std::vector<double> k2_list;
  for (auto& [k2, idx] : k2_index) {
    idx = static_cast<int>(k2_list.size());
    k2_list.push_back(k2);
  }
  std::vector<PoloidalModes> solved(k2_list.size());
  std::vector<std::string> failures(k2_list.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(k2_list.size()); ++i) {
    try {
      solved[i] = solve_poloidal(k2_list[i], d.Mv, d.Nv);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  }
  for (const auto& f : failures)
    if (!f.empty()) throw BasisError(f);

  std::vector<int> ritz_base(k2_list.size());
  for (std::size_t i = 0; i < k2_list.size(); ++i) {
    ritz_base[i] = static_cast<int>(b->profiles.size());
    for (int j = 1; j <= d.Nv; ++j)
      b->profiles.push_back(ritz_profile(j, k2_list[i], solved[i].coeffs[j - 1], b->quad));
  }

  for (std::size_t bi = 0; bi < b->blocks.size(); ++bi) {
    const auto& k = b->wavevectors[bi];
    auto& slots = b->blocks[bi].slots;
    if (k.k2 == 0) {
      for (int j = 1; j <= d.Nv; ++j) {
        for (int c = 0; c < 2; ++c) {
          Slot s;
          s.comp = c;
          s.j = j;
          s.profile = j - 1;
          s.eigenvalue = (j * kPi) * (j * kPi);
          s.a[c] = 1.0;
          slots.push_back(s);
        }
      }
      continue;
    }
    const double kappa = std::sqrt(k.k2);
    const int ki = k2_index.at(k.k2);
    for (int j = 1; j <= d.Nv; ++j) {
      Slot tor;
      tor.comp = 0;
      tor.j = j;
      tor.profile = j - 1;
      tor.eigenvalue = k.k2 + (j * kPi) * (j * kPi);
      tor.a = {-k.ky / kappa, k.kx / kappa, 0.0};
      slots.push_back(tor);

      Slot pol;
      pol.comp = 1;
      pol.j = j;
      pol.profile = ritz_base[ki] + j - 1;
      pol.eigenvalue = solved[ki].eigenvalues[j - 1];
      pol.a = {0.0, 0.0, 1.0};
      pol.b = {cplx(0.0, k.kx / k.k2), cplx(0.0, k.ky / k.k2), 0.0};
      slots.push_back(pol);
    }
  }
  return finish(b);
}

BasisPtr build_basis(OperatorKind op, const DomainSpec& d) {
  switch (op) {
    case OperatorKind::scalar_laplacian: return build_scalar_basis(d);
    case OperatorKind::vector_laplacian: return build_vector_basis(d);
    case OperatorKind::stokes: return build_stokes_basis(d);
  }
  throw ConfigError("unknown operator kind");
}

PoincareReport poincare_audit(const EigenBasis& b, int samples, std::uint64_t seed) {
  PoincareReport r;
  r.op = b.op;
  r.samples = samples;
  r.lambda1 = b.eigenvalues.empty() ? 0.0 : b.eigenvalues.front();
  r.deviation = r.lambda1 - kPi * kPi;

  // Per-block mass and Dirichlet matrices by quadrature, independent of the
  // stored eigenvalues.
  const int nq = b.quad.size();
  struct BlockForms {
    Eigen::MatrixXcd mass, dir;
  };
  std::vector<BlockForms> forms(b.blocks.size());
  for (std::size_t bi = 0; bi < b.blocks.size(); ++bi) {
    const auto& slots = b.blocks[bi].slots;
    const auto& k = b.wavevectors[bi];
    const int ns = static_cast<int>(slots.size());
    forms[bi].mass = Eigen::MatrixXcd::Zero(ns, ns);
    forms[bi].dir = Eigen::MatrixXcd::Zero(ns, ns);
    for (int s = 0; s < ns; ++s) {
      for (int t = 0; t < ns; ++t) {
        cplx m = 0, g = 0;
        for (int iq = 0; iq < nq; ++iq) {
          for (int c = 0; c < b.components(); ++c) {
            const cplx ps = slot_value(b, slots[s], c, iq, 0), pt = slot_value(b, slots[t], c, iq, 0);
            const cplx ds = slot_value(b, slots[s], c, iq, 1), dt = slot_value(b, slots[t], c, iq, 1);
            m += b.quad.w[iq] * std::conj(ps) * pt;
            g += b.quad.w[iq] * (k.k2 * std::conj(ps) * pt + std::conj(ds) * dt);
          }
        }
        forms[bi].mass(s, t) = m;
        forms[bi].dir(s, t) = g;
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  r.min_first_order = std::numeric_limits<double>::infinity();
  r.min_second_order = std::numeric_limits<double>::infinity();
  std::vector<double> c(b.size());
  for (int sample = 0; sample <= samples; ++sample) {
    if (sample == 0) {
      std::fill(c.begin(), c.end(), 0.0);
      c[0] = 1.0;
    } else {
      for (auto& x : c) x = U(rng);
    }
    double l2 = 0, h1 = 0, h2 = 0;
    for (std::size_t bi = 0; bi < b.blocks.size(); ++bi) {
      const auto& slots = b.blocks[bi].slots;
      if (slots.empty()) continue;
      Eigen::VectorXcd z(slots.size());
      for (std::size_t s = 0; s < slots.size(); ++s)
        z[s] = cplx(c[slots[s].idx_cos], slots[s].idx_sin >= 0 ? -c[slots[s].idx_sin] : 0.0);
      l2 += (z.adjoint() * forms[bi].mass * z)(0, 0).real();
      h1 += (z.adjoint() * forms[bi].dir * z)(0, 0).real();
    }
    for (std::size_t i = 0; i < c.size(); ++i) h2 += b.eigenvalues[i] * b.eigenvalues[i] * c[i] * c[i];
    r.min_first_order = std::min(r.min_first_order, h1 - kPi * kPi * l2);
    r.min_second_order = std::min(r.min_second_order, h2 - kPi * kPi * h1);
  }
  return r;
}

}  // namespace mprb
