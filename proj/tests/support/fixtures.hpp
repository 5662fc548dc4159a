#pragma once

#include <map>
#include <mutex>
#include <tuple>

#include "mprb/galerkin.hpp"

namespace fixture {

// Spaces are immutable; share one per resolution across test cases.
inline mprb::SpacePtr space(int Nh, int Mv, int Nv, double ax = 2.0, double ay = 2.0) {
  static std::map<std::tuple<int, int, int, double, double>, mprb::SpacePtr> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& sp = cache[{Nh, Mv, Nv, ax, ay}];
  if (!sp) {
    mprb::DomainSpec d;
    d.ax = ax, d.ay = ay, d.Nh = Nh, d.Mv = Mv, d.Nv = Nv;
    sp = mprb::Space::build(d);
  }
  return sp;
}

// The smallest instance used across the integrator tests: 54 modes.
inline mprb::SpacePtr tiny() { return space(1, 8, 1); }
inline mprb::SpacePtr small() { return space(2, 16, 2); }

inline mprb::DimensionlessParams params(double Ra = 100, double Pr = 10, double K = 0.05, double ax = 2.0,
                                        double ay = 2.0) {
  return mprb::DimensionlessParams::make(Ra, Pr, K, 1, 1, 1, ax, ay);
}

}  // namespace fixture
