#pragma once

// Q-Wiener component: Gaussian paths with E<W_t,a><W_s,b> = <Qa,b> min(s,t).

#include "levy/paths.hpp"
#include "levy/rng.hpp"
#include "levy/types.hpp"

#include <vector>

namespace levy {

class WienerSampler {
 public:
  /// Q is factored as L L^T through its symmetric eigendecomposition;
  /// eigenvalues in [-1e-10, 0) are clamped to zero.
  WienerSampler(Matrix covariance, std::vector<double> time_grid);

  const Matrix& covariance() const { return covariance_; }
  const Matrix& factor() const { return factor_; }
  const std::vector<double>& grid() const { return grid_; }
  Eigen::Index dim() const { return covariance_.rows(); }

 private:
  Matrix covariance_;
  Matrix factor_;
  std::vector<double> grid_;
};

/// Continuous path with W_0 = 0 and independent N(0, (t_{j+1}-t_j) Q)
/// increments on the grid.
CadlagPath sample_wiener_path(const WienerSampler& sampler, Rng& rng);

struct CovarianceCheck {
  double estimate = 0.0;
  double target = 0.0;
  double stderr_value = 0.0;
  double z_score = 0.0;
};

/// Sample mean of <W_t,a><W_s,b> against <Qa,b> min(s,t). s and t must be
/// grid times of every path.
CovarianceCheck wiener_cov_check(const std::vector<CadlagPath>& paths, const Matrix& covariance,
                                 const Vector& a, const Vector& b, double s, double t);

}  // namespace levy
