#pragma once

#include <stdexcept>
#include <string>

namespace wwb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model or algorithm parameter (alpha, b, H, strategy, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// b-adic grid index out of range or integer overflow in grid arithmetic.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Exact (b-adic) computation requested for a point that is not b-adic.
class ModeError : public Error {
 public:
  using Error::Error;
};

/// Problem size above a hard resource limit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Numerical procedure failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Log-log regression had too few usable points.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Estimator undefined for the given input (e.g. a flat path).
class EstimatorError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or command line.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace wwb
