#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kghdg {

/// Base class for all errors raised by the solver.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: degree out of range, non-positive tau, malformed range, ...
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Zero-area element or a local block that cannot be inverted.
class GeometryError : public Error {
public:
  using Error::Error;
};

class SingularMatrixError : public Error {
public:
  using Error::Error;
};

/// Newton failed to reach the residual tolerance.
class NewtonError : public Error {
public:
  NewtonError(const std::string& what, std::size_t iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}

  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

private:
  std::size_t iterations_;
  double residual_;
};

/// A time step failed; carries the index of the level that could not be computed.
class StepError : public Error {
public:
  StepError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

} // namespace kghdg
