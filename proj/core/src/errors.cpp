#include "mprb/errors.hpp"

#include <cstdio>

namespace mprb {

namespace {
std::string with_time(const std::string& what, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " (t = %.17g)", t);
  return what + buf;
}
}  // namespace

NumericalError::NumericalError(const std::string& what, double t)
    : Error(with_time(what, t)), time_(t) {}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e)) return 1;
  if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const BasisError*>(&e)) return 2;
  if (dynamic_cast<const IoError*>(&e)) return 3;
  return 4;
}

}  // namespace mprb
