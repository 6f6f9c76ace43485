#pragma once

#include <stdexcept>
#include <string>

namespace rkf {

/// Invalid or inconsistent model/experiment description.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values, failed factorizations, indefinite covariances.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rkf
