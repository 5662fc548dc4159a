#include "mprb/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mprb/errors.hpp"
#include "mprb/parallel.hpp"

namespace mprb {

namespace {

struct WaveTables {
  std::vector<double> kx, ky;
};

WaveTables wave_tables(const Space& sp) {
  const auto& d = sp.domain();
  const int width = 2 * d.Nh + 1;
  WaveTables t;
  t.kx.resize(static_cast<std::size_t>(d.Nh + 1) * width);
  t.ky.resize(t.kx.size());
  for (int m = 0; m <= d.Nh; ++m)
    for (int n = -d.Nh; n <= d.Nh; ++n) {
      const int pos = m * width + n + d.Nh;
      t.kx[pos] = 2.0 * std::numbers::pi * m / d.ax;
      t.ky[pos] = 2.0 * std::numbers::pi * n / d.ay;
    }
  return t;
}

// out(comp oc) = i k_axis * in(comp ic)
void horizontal_derivative(const Columns& in, int ic, const std::vector<double>& k, Columns& out, int oc) {
  for (int q = 0; q < in.nq; ++q) {
    const cplx* src = in.row(ic, q);
    cplx* dst = out.row(oc, q);
    for (int p = 0; p < in.npos; ++p) dst[p] = cplx(-k[p] * src[p].imag(), k[p] * src[p].real());
  }
}

void copy_comp(const Columns& in, int ic, Columns& out, int oc) {
  for (int q = 0; q < in.nq; ++q) std::copy_n(in.row(ic, q), in.npos, out.row(oc, q));
}

void require_vector(const Field& f, const char* what) {
  if (!f.is_vector()) throw ConfigError(std::string(what) + " needs a vector field");
}

}  // namespace

Field zero_field(const Space& sp, OperatorKind op) { return Field{op, std::vector<double>(sp.basis(op).size(), 0.0)}; }

State zero_state(const Space& sp) {
  State s;
  s.u = zero_field(sp, OperatorKind::stokes);
  s.gamma = zero_field(sp, OperatorKind::vector_laplacian);
  s.theta = zero_field(sp, OperatorKind::scalar_laplacian);
  return s;
}

void check_state(const Space& sp, const State& s) {
  if (s.u.op != OperatorKind::stokes || s.gamma.op != OperatorKind::vector_laplacian ||
      s.theta.op != OperatorKind::scalar_laplacian)
    throw ConfigError("state fields carry the wrong basis tags");
  if (s.u.c.size() != sp.basis(OperatorKind::stokes).size() ||
      s.gamma.c.size() != sp.basis(OperatorKind::vector_laplacian).size() ||
      s.theta.c.size() != sp.basis(OperatorKind::scalar_laplacian).size())
    throw ConfigError("state coefficient lengths do not match the bases");
}

GridField synthesize(const Space& sp, const Field& f) {
  Columns col;
  sp.synth_columns(f.op, f.c, 0, col);
  GridField g;
  sp.columns_to_grid(col, g);
  return g;
}

Field analyze(const Space& sp, const GridField& g, OperatorKind op) {
  const auto& b = sp.basis(op);
  if (g.comps != b.components() || g.nq != b.quad.size() || g.nx != sp.transform().nx() ||
      g.ny != sp.transform().ny())
    throw ConfigError("grid resolution does not match the basis");
  Columns col;
  sp.grid_to_columns(g, col);
  Field f{op, std::vector<double>(b.size(), 0.0)};
  sp.project_columns(op, col, f.c);
  return f;
}

GridField gradient(const Space& sp, const Field& f) {
  const auto kt = wave_tables(sp);
  Columns v, dz;
  sp.synth_columns(f.op, f.c, 0, v);
  sp.synth_columns(f.op, f.c, 1, dz);
  Columns out;
  out.resize(3 * v.comps, v.nq, v.npos);
  for (int i = 0; i < v.comps; ++i) {
    horizontal_derivative(v, i, kt.kx, out, 3 * i);
    horizontal_derivative(v, i, kt.ky, out, 3 * i + 1);
    copy_comp(dz, i, out, 3 * i + 2);
  }
  GridField g;
  sp.columns_to_grid(out, g);
  return g;
}

GridField divergence(const Space& sp, const Field& f) {
  require_vector(f, "divergence");
  const auto kt = wave_tables(sp);
  Columns v, dz;
  sp.synth_columns(f.op, f.c, 0, v);
  sp.synth_columns(f.op, f.c, 1, dz);
  Columns out;
  out.resize(1, v.nq, v.npos);
  for (int q = 0; q < v.nq; ++q) {
    const cplx *a = v.row(0, q), *b = v.row(1, q), *c = dz.row(2, q);
    cplx* o = out.row(0, q);
    for (int p = 0; p < v.npos; ++p) o[p] = cplx(0, kt.kx[p]) * a[p] + cplx(0, kt.ky[p]) * b[p] + c[p];
  }
  GridField g;
  sp.columns_to_grid(out, g);
  return g;
}

GridField curl(const Space& sp, const Field& f) {
  require_vector(f, "curl");
  const auto kt = wave_tables(sp);
  Columns v, dz;
  sp.synth_columns(f.op, f.c, 0, v);
  sp.synth_columns(f.op, f.c, 1, dz);
  Columns out;
  out.resize(3, v.nq, v.npos);
  for (int q = 0; q < v.nq; ++q) {
    const cplx *f0 = v.row(0, q), *f1 = v.row(1, q), *f2 = v.row(2, q);
    const cplx *d0 = dz.row(0, q), *d1 = dz.row(1, q);
    cplx *o0 = out.row(0, q), *o1 = out.row(1, q), *o2 = out.row(2, q);
    for (int p = 0; p < v.npos; ++p) {
      const cplx ikx(0, kt.kx[p]), iky(0, kt.ky[p]);
      o0[p] = iky * f2[p] - d1[p];
      o1[p] = d0[p] - ikx * f2[p];
      o2[p] = ikx * f1[p] - iky * f0[p];
    }
  }
  GridField g;
  sp.columns_to_grid(out, g);
  return g;
}

GridField laplacian(const Space& sp, const Field& f) {
  const auto kt = wave_tables(sp);
  Columns v, d2;
  sp.synth_columns(f.op, f.c, 0, v);
  sp.synth_columns(f.op, f.c, 2, d2);
  for (int c = 0; c < v.comps; ++c)
    for (int q = 0; q < v.nq; ++q) {
      cplx* o = v.row(c, q);
      const cplx* s = d2.row(c, q);
      for (int p = 0; p < v.npos; ++p) o[p] = s[p] - (kt.kx[p] * kt.kx[p] + kt.ky[p] * kt.ky[p]) * o[p];
    }
  GridField g;
  sp.columns_to_grid(v, g);
  return g;
}

GridField grad_div(const Space& sp, const Field& f) {
  require_vector(f, "grad_div");
  const auto kt = wave_tables(sp);
  Columns v, d1, d2;
  sp.synth_columns(f.op, f.c, 0, v);
  sp.synth_columns(f.op, f.c, 1, d1);
  sp.synth_columns(f.op, f.c, 2, d2);
  Columns out;
  out.resize(3, v.nq, v.npos);
  for (int q = 0; q < v.nq; ++q) {
    for (int p = 0; p < v.npos; ++p) {
      const cplx ikx(0, kt.kx[p]), iky(0, kt.ky[p]);
      const cplx div = ikx * v.row(0, q)[p] + iky * v.row(1, q)[p] + d1.row(2, q)[p];
      const cplx div_z = ikx * d1.row(0, q)[p] + iky * d1.row(1, q)[p] + d2.row(2, q)[p];
      out.row(0, q)[p] = ikx * div;
      out.row(1, q)[p] = iky * div;
      out.row(2, q)[p] = div_z;
    }
  }
  GridField g;
  sp.columns_to_grid(out, g);
  return g;
}

Field galerkin_project(const Space& sp, const GridField& v) {
  if (v.comps != 3) throw ConfigError("galerkin_project needs a vector grid field");
  return analyze(sp, v, OperatorKind::stokes);
}

double grid_inner(const Space& sp, const GridField& a, const GridField& b) {
  if (a.comps != b.comps || a.nq != b.nq || a.nx != b.nx || a.ny != b.ny)
    throw ConfigError("grid_inner: layouts differ");
  std::vector<double> per_level(a.nq, 0.0);
  for (int q = 0; q < a.nq; ++q) {
    double s = 0;
    for (int c = 0; c < a.comps; ++c) {
      const double *x = a.level(c, q), *y = b.level(c, q);
      for (std::size_t i = 0; i < a.slab(); ++i) s += x[i] * y[i];
    }
    per_level[q] = s * sp.cell_weight(q);
  }
  return pairwise_sum(per_level);
}

double max_abs(const GridField& g) {
  double m = 0;
  for (double x : g.v) m = std::max(m, std::abs(x));
  return m;
}

double l2_norm(const Field& f) {
  std::vector<double> sq(f.c.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = f.c[i] * f.c[i];
  return std::sqrt(pairwise_sum(sq));
}

double h1_seminorm(const Space& sp, const Field& f) {
  const auto& lam = sp.basis(f.op).eigenvalues;
  std::vector<double> sq(f.c.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = lam[i] * f.c[i] * f.c[i];
  return std::sqrt(pairwise_sum(sq));
}

double h2_operator_norm(const Space& sp, const Field& f) {
  const auto& lam = sp.basis(f.op).eigenvalues;
  std::vector<double> sq(f.c.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = lam[i] * lam[i] * f.c[i] * f.c[i];
  return std::sqrt(pairwise_sum(sq));
}

TemperatureParts temperature_parts(const Space& sp, const Field& theta) {
  const GridField g = synthesize(sp, theta);
  const auto& z = sp.quad().z;
  std::vector<double> pos(g.nq), neg(g.nq);
  for (int q = 0; q < g.nq; ++q) {
    double sp_ = 0, sn = 0;
    const double* th = g.level(0, q);
    for (std::size_t i = 0; i < g.slab(); ++i) {
      const double T = th[i] + 1.0 - z[q];
      if (T > 1.0) sp_ += (T - 1.0) * (T - 1.0);
      if (T < 0.0) sn += T * T;
    }
    pos[q] = sp_ * sp.cell_weight(q);
    neg[q] = sn * sp.cell_weight(q);
  }
  return {std::sqrt(pairwise_sum(pos)), std::sqrt(pairwise_sum(neg))};
}

Field temperature_blob(const Space& sp, double peak_T, double width) {
  if (!(width > 0)) throw ConfigError("blob width must be positive");
  const auto& d = sp.domain();
  const auto& tr = sp.transform();
  const auto& z = sp.quad().z;
  GridField g;
  g.resize(1, static_cast<int>(z.size()), tr.nx(), tr.ny());
  auto periodic = [](double x, double L) { return x - L * std::round(x / L); };
  for (int q = 0; q < g.nq; ++q) {
    const double s = std::sin(std::numbers::pi * z[q]);
    const double amp = (peak_T - (1.0 - 0.5)) * s * s;
    double* lvl = g.level(0, q);
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) {
        const double dx = periodic(tr.x(i) - 0.5 * d.ax, d.ax);
        const double dy = periodic(tr.y(j) - 0.5 * d.ay, d.ay);
        lvl[static_cast<std::size_t>(i) * g.ny + j] = amp * std::exp(-(dx * dx + dy * dy) / (width * width));
      }
  }
  return analyze(sp, g, OperatorKind::scalar_laplacian);
}

NormSet norms(const Space& sp, const State& s, const DimensionlessParams& dp) {
  NormSet n;
  n.l2_u = l2_norm(s.u);
  n.l2_gamma = l2_norm(s.gamma);
  n.l2_theta = l2_norm(s.theta);
  n.h1_u = h1_seminorm(sp, s.u);
  n.h1_gamma = h1_seminorm(sp, s.gamma);
  n.h1_theta = h1_seminorm(sp, s.theta);
  n.V = n.h1_u * n.h1_u + dp.M * n.h1_gamma * n.h1_gamma;
  const auto tp = temperature_parts(sp, s.theta);
  n.pos_part = tp.pos;
  n.neg_part = tp.neg;
  return n;
}

}  // namespace mprb
