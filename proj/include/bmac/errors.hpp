#pragma once

#include <stdexcept>
#include <string>

namespace bmac {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an operation's input was violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The transmit function kind does not support the requested operation.
class UnsupportedKindError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of subdivisions before reaching tolerance.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(std::string integral, double best_estimate, double error_bound,
                      int subdivisions);

  const std::string& integral() const { return integral_; }
  double best_estimate() const { return best_estimate_; }
  double error_bound() const { return error_bound_; }
  int subdivisions() const { return subdivisions_; }

  /// Same failure, relabelled with the caller's description of the integral.
  NonConvergenceError relabel(const std::string& integral) const {
    return {integral, best_estimate_, error_bound_, subdivisions_};
  }

 private:
  std::string integral_;
  double best_estimate_;
  double error_bound_;
  int subdivisions_;
};

/// A monotone inversion target lies outside the closure of the function's range.
class OutOfRangeError : public Error {
 public:
  OutOfRangeError(double target, double nearest_argument, double nearest_value);

  double target() const { return target_; }
  /// Argument of the bracket endpoint whose value came closest to the target.
  double nearest_argument() const { return nearest_argument_; }
  double nearest_value() const { return nearest_value_; }

 private:
  double target_;
  double nearest_argument_;
  double nearest_value_;
};

/// Matched density construction produced a non-integrable function.
class NonNormalizableError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration. `field` is a dotted path, `line` is 1-based or 0 if unknown.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message, int line = 0);

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

}  // namespace bmac
