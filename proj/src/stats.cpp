#include "levy/stats.hpp"

#include <algorithm>

namespace levy::stats {

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const auto half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double mean(std::span<const double> xs) {
  require(!xs.empty(), "mean: empty sample");
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  require(xs.size() >= 2, "sample_variance: need at least two values");
  const double m = mean(xs);
  std::vector<double> sq(xs.size());
  std::transform(xs.begin(), xs.end(), sq.begin(), [m](double x) { return (x - m) * (x - m); });
  return pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
}

double standard_error(std::span<const double> xs) {
  return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

Correlation correlation(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size(), "correlation: size mismatch");
  require(xs.size() >= 4, "correlation: need at least four pairs");
  const double mx = mean(xs);
  const double my = mean(ys);
  std::vector<double> cxy(xs.size()), cxx(xs.size()), cyy(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    cxy[i] = dx * dy;
    cxx[i] = dx * dx;
    cyy[i] = dy * dy;
  }
  const double sxx = pairwise_sum(cxx);
  const double syy = pairwise_sum(cyy);
  Correlation out;
  const double scale = static_cast<double>(xs.size());
  // Variance below round-off of the values counts as none.
  auto negligible = [&](double s, double m) {
    return s <= scale * 1e-24 * std::max(1.0, m * m);
  };
  if (negligible(sxx, mx) || negligible(syy, my)) {
    out.zero_variance = true;
    return out;
  }
  out.r = std::clamp(pairwise_sum(cxy) / std::sqrt(sxx * syy), -1.0, 1.0);
  const double n = static_cast<double>(xs.size());
  out.z = std::abs(out.r) >= 1.0 ? kInfinity : std::atanh(out.r) * std::sqrt(n - 3.0);
  return out;
}

double z_score(double difference, double stderr_value) {
  const double diff = std::abs(difference);
  if (diff <= 1e-12) return 0.0;
  return stderr_value > 0.0 ? diff / stderr_value : kInfinity;
}

}  // namespace levy::stats
