#pragma once

#include <stdexcept>
#include <string>

namespace hybridsim {

// Solver could not produce a trustworthy result (step underflow, singular
// solve, invariant drift). The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class InvariantViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateSteadyState : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Malformed or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hybridsim
