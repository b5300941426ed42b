#pragma once

#include <stdexcept>
#include <string>

namespace hs6v {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (DP states, degree, nodes) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Contour radii or other setup cannot satisfy the geometric constraints.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure did not reach the requested tolerance.
/// Carries the best value obtained so callers may still report it.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best_value, double error_estimate)
      : Error(what), best_value_(best_value), error_estimate_(error_estimate) {}

  double best_value() const noexcept { return best_value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_value_;
  double error_estimate_;
};

}  // namespace hs6v
