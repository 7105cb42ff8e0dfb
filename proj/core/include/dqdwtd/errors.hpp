#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dqdwtd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands with incompatible shapes (non-square operators, mixed Hilbert dimensions).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument value was violated (negative rate, non-Hermitian H, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Overflow in a matrix function, or a probability outside [0,1] beyond tolerance.
class NumericalRangeError : public Error {
 public:
  using Error::Error;
};

/// (epsilon, t_c) = (0, 0): the dot eigenbasis is undefined.
class DegenerateParametersError : public Error {
 public:
  using Error::Error;
};

/**
 * \brief Right-hand side is not in the column space of a singular system.
 *
 * In the waiting-time engine this signals an initial state that can survive
 * forever without a monitored jump (e.g. the empty cavity relaxing into the
 * dark state), so the requested first-jump statistics do not exist.
 */
class InconsistentSystemError : public Error {
 public:
  InconsistentSystemError(const std::string& what, double residual, double tolerance)
      : Error(what), residual_(residual), tolerance_(tolerance) {}
  double residual() const noexcept { return residual_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  double residual_;
  double tolerance_;
};

/// Doubling the quadrature node count moved a result by more than the tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A stochastic trajectory failed; carries the index of the trajectory in its ensemble.
class TrajectoryError : public Error {
 public:
  TrajectoryError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace dqdwtd
