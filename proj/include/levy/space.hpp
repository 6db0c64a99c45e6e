#pragma once

// Finite-dimensional coordinate model of the state space: separating
// coordinate functionals with summable weights, Banach disks given by
// weighted-sup radii, the gauge norm of a disk, and the shell partition
//   C_0 = K^c,  C_n = (1/n)K \ (1/(n+1))K,  n >= 1.

#include "levy/types.hpp"

#include <cmath>
#include <cstddef>

namespace levy {

/// Coordinate space R^d with weights for the weak metric
/// d(x, y) = sum_i w_i min(1, |x_i - y_i|).
class SpaceModel {
 public:
  /// Geometric weights 2^{-i}, i = 1..dim, normalized to sum to one.
  explicit SpaceModel(Eigen::Index dim);
  /// Weights must be positive; they are rescaled to sum to one when their
  /// sum exceeds one.
  explicit SpaceModel(Vector functional_weights);

  Eigen::Index dim() const { return weights_.size(); }
  const Vector& weights() const { return weights_; }

 private:
  Vector weights_;
};

/// K = {x : max_i |x_i| / k_i <= 1}.
class BanachDisk {
 public:
  explicit BanachDisk(Vector radii);
  /// Unit cube radii (1, ..., 1).
  static BanachDisk unit(Eigen::Index dim);

  Eigen::Index dim() const { return radii_.size(); }
  const Vector& radii() const { return radii_; }

 private:
  Vector radii_;
};

/// Shell label: 0 is the complement of K, n >= 1 is C_n.
struct ShellIndex {
  int n = 0;

  constexpr bool outside() const { return n == 0; }
  friend constexpr bool operator==(ShellIndex, ShellIndex) = default;
  friend constexpr auto operator<=>(ShellIndex, ShellIndex) = default;
};

template <typename Derived>
typename Derived::Scalar gauge_norm(const Eigen::MatrixBase<Derived>& x, const BanachDisk& disk) {
  require_same_dim(x, disk.radii(), "gauge_norm");
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) return Scalar(0);
  return (x.array().abs() / disk.radii().array().template cast<Scalar>()).maxCoeff();
}

template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar weak_distance(const Eigen::MatrixBase<DerivedX>& x,
                                        const Eigen::MatrixBase<DerivedY>& y,
                                        const SpaceModel& model) {
  require_same_dim(x, y, "weak_distance");
  require_same_dim(x, model.weights(), "weak_distance");
  using Scalar = typename DerivedX::Scalar;
  return ((x - y).array().abs().min(Scalar(1)) * model.weights().array().template cast<Scalar>())
      .sum();
}

/// Shell of a gauge value g > 0: 0 when g > 1, else the n with
/// 1/(n+1) < g <= 1/n.
ShellIndex shell_of_gauge(double gauge);

template <typename Derived>
ShellIndex shell_index(const Eigen::MatrixBase<Derived>& x, const BanachDisk& disk) {
  const double g = static_cast<double>(gauge_norm(x, disk));
  if (g == 0.0) throw InvalidArgument("shell_index: the origin carries no shell");
  return shell_of_gauge(g);
}

/// Gauge interval (lower, upper] covered by shell n >= 1.
struct GaugeInterval {
  double lower;
  double upper;
};
GaugeInterval shell_gauge_interval(int n);

}  // namespace levy
