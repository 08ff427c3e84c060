#pragma once

#include <stdexcept>
#include <string>

namespace hvlab {

/// Invalid construction parameters (grid shape, config values, ...).
class ConfigError : public std::invalid_argument {
public:
  ConfigError(const std::string& field, const std::string& why)
      : std::invalid_argument(field + ": " + why), field_(field) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A state that violates the invariants of its type.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands defined on incompatible grids.
class GridMismatchError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A time integrator left its stability / accuracy envelope.
class StabilityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Iterative numerics (root bracketing, quadrature) failed to converge.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace hvlab
