#include <cstdio>
#include <filesystem>
#include <fstream>

#include "binary_io.hpp"
#include "mprb/errors.hpp"
#include "mprb/spectral_basis.hpp"

namespace mprb {

namespace {

constexpr char kMagic[8] = {'M', 'P', 'R', 'B', 'B', 'A', 'S', '\0'};
constexpr std::uint32_t kVersion = 1;

// 64-bit FNV-1a over the header fields, used only to name cache files.
std::uint64_t key_hash(OperatorKind op, const DomainSpec& d) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) h = (h ^ c[i]) * 1099511628211ull;
  };
  const auto o = static_cast<std::uint32_t>(op);
  mix(&o, sizeof o);
  mix(&d.ax, sizeof d.ax);
  mix(&d.ay, sizeof d.ay);
  for (int v : {d.Mv, d.Nh, d.Nv, d.n_scalar, d.n_vector, d.n_stokes}) mix(&v, sizeof v);
  return h;
}

}  // namespace

// Layout (all little-endian):
//   magic[8] "MPRBBAS\0", u32 version, u32 operator
//   f64 ax, ay; i32 Mv, Nh, Nv, n_scalar, n_vector, n_stokes
//   u64 N, f64 eigenvalues[N]
//   N x {i32 m, n, trig, comp, j}
//   u64 P, then P profiles {u32 kind, i32 j, f64 k2, u64 C, f64 coeffs[C],
//                           4 x (u64 Q, f64 samples[Q])}
//   u64 B, then B blocks {u64 S, S slots {i32 comp, j, profile; f64 eigenvalue;
//                         f64 re/im of a[3], b[3]; i32 idx_cos, idx_sin}}
//   f64 gram_deviation
std::string basis_cache_filename(OperatorKind op, const DomainSpec& d) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s-%016llx.basis", to_string(op),
                static_cast<unsigned long long>(key_hash(op, d)));
  return buf;
}

void write_basis_cache(const EigenBasis& b, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open basis cache '" + path + "' for writing");
  bin::Writer w(f);
  w.bytes(kMagic, sizeof kMagic);
  w.put(kVersion);
  w.put(static_cast<std::uint32_t>(b.op));
  bin::write_domain(w, b.domain);
  w.f64s(b.eigenvalues);
  for (const auto& m : b.modes)
    for (int v : {m.m, m.n, m.trig, m.comp, m.j}) w.put<std::int32_t>(v);
  w.put<std::uint64_t>(b.profiles.size());
  for (const auto& p : b.profiles) {
    w.put(static_cast<std::uint32_t>(p.kind));
    w.put<std::int32_t>(p.j);
    w.put(p.k2);
    w.f64s(p.coeffs);
    for (const auto& d : p.d) w.f64s(d);
  }
  w.put<std::uint64_t>(b.blocks.size());
  for (const auto& blk : b.blocks) {
    w.put<std::uint64_t>(blk.slots.size());
    for (const auto& s : blk.slots) {
      w.put<std::int32_t>(s.comp);
      w.put<std::int32_t>(s.j);
      w.put<std::int32_t>(s.profile);
      w.put(s.eigenvalue);
      for (const auto& v : s.a) w.put(v.real()), w.put(v.imag());
      for (const auto& v : s.b) w.put(v.real()), w.put(v.imag());
      w.put<std::int32_t>(s.idx_cos);
      w.put<std::int32_t>(s.idx_sin);
    }
  }
  w.put(b.gram_deviation);
  f.flush();
  w.check(path);
}

BasisPtr read_basis_cache(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open basis cache '" + path + "'");
  bin::Reader r(f, path);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw IoError("'" + path + "' is not a basis cache");
  if (r.get<std::uint32_t>() != kVersion) throw IoError("basis cache '" + path + "' has an unsupported version");

  auto b = std::make_shared<EigenBasis>();
  const auto op = r.get<std::uint32_t>();
  if (op > 2) throw IoError("corrupt operator tag in '" + path + "'");
  b->op = static_cast<OperatorKind>(op);
  b->domain = bin::read_domain(r);
  b->domain.validate();
  b->quad = gauss_legendre_unit(b->domain.quad_points());

  b->wavevectors = horizontal_wavevectors(b->domain);

  b->eigenvalues = r.f64s();
  b->modes.resize(b->eigenvalues.size());
  for (auto& m : b->modes) {
    m.m = r.get<std::int32_t>();
    m.n = r.get<std::int32_t>();
    m.trig = r.get<std::int32_t>();
    m.comp = r.get<std::int32_t>();
    m.j = r.get<std::int32_t>();
  }
  const auto np = r.get<std::uint64_t>();
  if (np > (1u << 24)) throw IoError("corrupt profile count in '" + path + "'");
  b->profiles.resize(np);
  for (auto& p : b->profiles) {
    p.kind = static_cast<ProfileKind>(r.get<std::uint32_t>());
    p.j = r.get<std::int32_t>();
    p.k2 = r.get<double>();
    p.coeffs = r.f64s();
    for (auto& d : p.d) {
      d = r.f64s();
      if (static_cast<int>(d.size()) != b->quad.size()) throw IoError("profile size mismatch in '" + path + "'");
    }
  }
  const auto nb = r.get<std::uint64_t>();
  if (nb != b->wavevectors.size()) throw IoError("block count mismatch in '" + path + "'");
  b->blocks.resize(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    auto& blk = b->blocks[i];
    blk.wavevector = static_cast<int>(i);
    const auto ns = r.get<std::uint64_t>();
    if (ns > (1u << 20)) throw IoError("corrupt slot count in '" + path + "'");
    blk.slots.resize(ns);
    for (auto& s : blk.slots) {
      s.comp = r.get<std::int32_t>();
      s.j = r.get<std::int32_t>();
      s.profile = r.get<std::int32_t>();
      s.eigenvalue = r.get<double>();
      for (auto& v : s.a) {
        const double re = r.get<double>();
        v = cplx(re, r.get<double>());
      }
      for (auto& v : s.b) {
        const double re = r.get<double>();
        v = cplx(re, r.get<double>());
      }
      s.idx_cos = r.get<std::int32_t>();
      s.idx_sin = r.get<std::int32_t>();
      if (s.profile < 0 || static_cast<std::size_t>(s.profile) >= b->profiles.size() || s.idx_cos < 0 ||
          static_cast<std::size_t>(s.idx_cos) >= b->eigenvalues.size() ||
          s.idx_sin >= static_cast<int>(b->eigenvalues.size()))
        throw IoError("corrupt slot in '" + path + "'");
    }
  }
  b->gram_deviation = r.get<double>();
  return b;
}

BasisPtr load_or_build_basis(OperatorKind op, const DomainSpec& d, const std::string& cache_dir, bool* hit) {
  namespace fs = std::filesystem;
  const fs::path path = fs::path(cache_dir) / basis_cache_filename(op, d);
  if (fs::exists(path)) {
    try {
      auto b = read_basis_cache(path.string());
      if (b->op == op && b->domain == d) {
        if (hit) *hit = true;
        return b;
      }
    } catch (const IoError&) {
      // Stale or damaged cache: rebuild below and overwrite.
    }
  }
  if (hit) *hit = false;
  auto b = build_basis(op, d);
  std::error_code ec;
  fs::create_directories(cache_dir, ec);
  write_basis_cache(*b, path.string());
  return b;
}

}  // namespace mprb
