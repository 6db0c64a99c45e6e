#include "levy/space.hpp"

#include <utility>

namespace levy {

SpaceModel::SpaceModel(Eigen::Index dim) {
  require(dim >= 1, "SpaceModel: dimension must be positive");
  weights_.resize(dim);
  double w = 1.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    w *= 0.5;
    weights_[i] = w;
  }
  weights_ /= weights_.sum();
}

SpaceModel::SpaceModel(Vector functional_weights) : weights_(std::move(functional_weights)) {
  require(weights_.size() >= 1, "SpaceModel: dimension must be positive");
  for (Eigen::Index i = 0; i < weights_.size(); ++i)
    require(std::isfinite(weights_[i]) && weights_[i] > 0.0,
            "SpaceModel: functional weights must be positive and finite");
  const double total = weights_.sum();
  if (total > 1.0) weights_ /= total;
}

BanachDisk::BanachDisk(Vector radii) : radii_(std::move(radii)) {
  require(radii_.size() >= 1, "BanachDisk: dimension must be positive");
  for (Eigen::Index i = 0; i < radii_.size(); ++i)
    require(std::isfinite(radii_[i]) && radii_[i] > 0.0,
            "BanachDisk: radii must be positive and finite");
}

BanachDisk BanachDisk::unit(Eigen::Index dim) { return BanachDisk(Vector::Ones(dim)); }

ShellIndex shell_of_gauge(double gauge) {
  require(gauge > 0.0 && !std::isnan(gauge), "shell_of_gauge: gauge must be positive");
  if (gauge > 1.0) return {0};
  if (std::isinf(1.0 / gauge)) throw InvalidArgument("shell_of_gauge: gauge underflows");
  // Candidate from floor(1/g), then correct the off-by-one that rounding in
  // 1/g can introduce near shell boundaries.
  double inv = 1.0 / gauge;
  require(inv < 2.0e9, "shell_of_gauge: gauge too small for integer shell index");
  int n = static_cast<int>(std::floor(inv));
  if (n < 1) n = 1;
  while (n > 1 && gauge > 1.0 / n) --n;
  while (!(gauge > 1.0 / (n + 1))) ++n;
  return {n};
}

GaugeInterval shell_gauge_interval(int n) {
  require(n >= 1, "shell_gauge_interval: shell must be >= 1");
  return {1.0 / (n + 1), 1.0 / n};
}

}  // namespace levy
