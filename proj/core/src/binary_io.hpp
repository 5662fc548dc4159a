#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "mprb/errors.hpp"
#include "mprb/spectral_basis.hpp"

namespace mprb::bin {

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}
  template <class T>
  void put(T v) {
    v = to_little(v);
    os_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void bytes(const char* p, std::size_t n) { os_.write(p, static_cast<std::streamsize>(n)); }
  void f64s(const std::vector<double>& v) {
    put<std::uint64_t>(v.size());
    for (double x : v) put(x);
  }
  void check(const std::string& what) {
    if (!os_) throw IoError("write failed: " + what);
  }

 private:
  std::ostream& os_;
};

class Reader {
 public:
  Reader(std::istream& is, std::string what) : is_(is), what_(std::move(what)) {}
  template <class T>
  T get() {
    T v;
    is_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is_) throw IoError("truncated file: " + what_);
    return to_little(v);
  }
  void bytes(char* p, std::size_t n) {
    is_.read(p, static_cast<std::streamsize>(n));
    if (!is_) throw IoError("truncated file: " + what_);
  }
  std::vector<double> f64s(std::uint64_t limit = (1ull << 32)) {
    const auto n = get<std::uint64_t>();
    if (n > limit) throw IoError("corrupt array length in " + what_);
    std::vector<double> v(n);
    for (auto& x : v) x = get<double>();
    return v;
  }

 private:
  std::istream& is_;
  std::string what_;
};

inline void write_domain(Writer& w, const DomainSpec& d) {
  w.put(d.ax);
  w.put(d.ay);
  for (int v : {d.Mv, d.Nh, d.Nv, d.n_scalar, d.n_vector, d.n_stokes}) w.put<std::int32_t>(v);
}

inline DomainSpec read_domain(Reader& r) {
  DomainSpec d;
  d.ax = r.get<double>();
  d.ay = r.get<double>();
  d.Mv = r.get<std::int32_t>();
  d.Nh = r.get<std::int32_t>();
  d.Nv = r.get<std::int32_t>();
  d.n_scalar = r.get<std::int32_t>();
  d.n_vector = r.get<std::int32_t>();
  d.n_stokes = r.get<std::int32_t>();
  return d;
}

}  // namespace mprb::bin
