#ifndef GRAPHCOV_COMMON_H_
#define GRAPHCOV_COMMON_H_

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace graphcov {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Base class for every error raised by the library. The CLI maps the
// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Raised when a model or system matrix does not have full column rank.
class RankDeficientError : public Error {
 public:
  RankDeficientError(const std::string& what, int rank, int columns)
      : Error(what + " (numerical rank " + std::to_string(rank) + " of " +
              std::to_string(columns) + ")"),
        rank_(rank),
        columns_(columns) {}

  int rank() const { return rank_; }
  int columns() const { return columns_; }

 private:
  int rank_;
  int columns_;
};

class SingularError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A request beyond what the implementation is willing to compute, e.g. an
// exhaustive search past its configured size limit.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphcov

#endif  // GRAPHCOV_COMMON_H_
