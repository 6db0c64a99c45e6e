#pragma once

#include <Eigen/Core>

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace levy {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument or precondition violation (wrong dimension, bad parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A statistic that cannot be formed because the input has no spread.
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

/// A numerical budget (series cutoff, quadrature shells, Monte Carlo
/// samples) ran out before the requested accuracy was reached.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

template <typename A, typename B>
void require_same_dim(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                      const char* what) {
  if (a.size() != b.size())
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" +
                          std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

}  // namespace levy
