#pragma once

#include <stdexcept>
#include <string>

namespace dprime {

/// A computation ran but could not reach the requested accuracy, or hit a
/// singular configuration (vanishing Wronskian, step underflow, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature stopped above the requested absolute tolerance.
class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double achieved)
      : NumericalError(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Malformed potential specification or experiment configuration.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dprime
