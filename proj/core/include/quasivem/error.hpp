#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quasivem {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or degenerate geometry (orientation, convexity, overlapping edges).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A dense or sparse linear system could not be solved to the requested accuracy.
class LinearAlgebraError : public Error {
 public:
  using Error::Error;
};

/// Coefficient or data violates the model assumptions.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration or mesh file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The nonlinear iteration hit its iteration limit. `increments` holds the
/// scaled increment of every step taken.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> increments)
      : Error(what), increments(std::move(increments)) {}
  std::vector<double> increments;
};

}  // namespace quasivem
