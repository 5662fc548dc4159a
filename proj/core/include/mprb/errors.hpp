#pragma once

#include <stdexcept>
#include <string>

namespace mprb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid physical or dimensionless constants.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration, inconsistent sizes, bad truncation requests.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class BasisError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double t);
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class StiffnessError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Process exit code used by the command-line tool for each error family.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace mprb
