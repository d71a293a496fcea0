#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace regrom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a time integration produces non-finite values.
class BlowUpError : public Error {
public:
  BlowUpError(const std::string& what, long step) : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

private:
  long step_;
};

/// Raised when a linear system cannot be solved reliably.
class SingularSystemError : public Error {
public:
  SingularSystemError(const std::string& what, double rcond) : Error(what), rcond_(rcond) {}
  double reciprocal_condition() const noexcept { return rcond_; }

private:
  double rcond_;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

}  // namespace regrom
