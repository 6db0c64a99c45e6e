#include "levy/gaussian.hpp"

#include "levy/stats.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace levy {

WienerSampler::WienerSampler(Matrix covariance, std::vector<double> time_grid)
    : covariance_(std::move(covariance)), grid_(std::move(time_grid)) {
  const auto d = covariance_.rows();
  require(d >= 1 && covariance_.cols() == d, "WienerSampler: covariance must be square");
  require(covariance_.allFinite(), "WienerSampler: non-finite covariance");
  require((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
          "WienerSampler: covariance must be symmetric");
  require(grid_.size() >= 2 && grid_.front() == 0.0, "WienerSampler: grid must start at 0");
  for (std::size_t i = 1; i < grid_.size(); ++i)
    require(grid_[i] > grid_[i - 1], "WienerSampler: grid must be strictly increasing");

  const Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance_);
  Vector lambda = eig.eigenvalues();
  for (Eigen::Index i = 0; i < d; ++i) {
    require(lambda[i] >= -1e-10, "WienerSampler: covariance is not positive semidefinite");
    lambda[i] = std::max(lambda[i], 0.0);
  }
  factor_ = eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
  require((factor_ * factor_.transpose() - covariance_).cwiseAbs().maxCoeff() <= 1e-10,
          "WienerSampler: factorization residual above 1e-10");
}

CadlagPath sample_wiener_path(const WienerSampler& sampler, Rng& rng) {
  const auto& grid = sampler.grid();
  const auto d = sampler.dim();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> values;
  values.reserve(grid.size());
  values.push_back(Vector::Zero(d));
  Vector z(d);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    for (Eigen::Index k = 0; k < d; ++k) z[k] = normal(rng);
    values.push_back(values.back() + std::sqrt(grid[i] - grid[i - 1]) * (sampler.factor() * z));
  }
  return CadlagPath::continuous(grid, values);
}

namespace {

const Vector& grid_value(const CadlagPath& path, double t) {
  const auto& knots = path.knots();
  const auto it = std::find_if(knots.begin(), knots.end(),
                               [t](const Knot& k) { return k.time == t && k.on_grid; });
  if (it == knots.end())
    throw InvalidArgument("wiener_cov_check: time " + std::to_string(t) + " is not a grid time");
  return it->value;
}

}  // namespace

CovarianceCheck wiener_cov_check(const std::vector<CadlagPath>& paths, const Matrix& covariance,
                                 const Vector& a, const Vector& b, double s, double t) {
  require(paths.size() >= 2, "wiener_cov_check: need at least two paths");
  require(a.size() == covariance.rows() && b.size() == covariance.rows(),
          "wiener_cov_check: dimension mismatch");
  std::vector<double> products(paths.size());
  for (std::size_t j = 0; j < paths.size(); ++j)
    products[j] = grid_value(paths[j], t).dot(a) * grid_value(paths[j], s).dot(b);
  CovarianceCheck out;
  out.estimate = stats::mean(products);
  // Symmetrized so that (a, b) and (b, a) share one target bit for bit.
  out.target = 0.5 * ((covariance * a).dot(b) + (covariance * b).dot(a)) * std::min(s, t);
  out.stderr_value = stats::standard_error(products);
  out.z_score = stats::z_score(out.estimate - out.target, out.stderr_value);
  return out;
}

}  // namespace levy
