#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bateman {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands live over different bases / incompatible shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative or series construction did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A nullspace or a restricted norm degenerated (dimension != 1, zero norm).
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// The truncation cap leaves no headroom for the requested construction.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A quadrature rule cannot integrate the requested degree exactly.
class ExactnessError : public Error {
 public:
  using Error::Error;
};

/// File I/O failure; message carries the offending path.
class FilesystemError : public Error {
 public:
  using Error::Error;
};

}  // namespace bateman
