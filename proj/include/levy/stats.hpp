#pragma once

#include "levy/types.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace levy::stats {

/// Pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> xs);

double mean(std::span<const double> xs);

/// Unbiased sample variance; requires at least two values.
double sample_variance(std::span<const double> xs);

/// Standard error of the sample mean.
double standard_error(std::span<const double> xs);

struct Correlation {
  double r = 0.0;
  double z = 0.0;          // Fisher z * sqrt(n - 3); infinite for |r| = 1
  bool zero_variance = false;
};
Correlation correlation(std::span<const double> xs, std::span<const double> ys);

/// |estimate - target| / stderr. Differences up to 1e-12 count as exact
/// agreement (0), so rounding-level spreads of constant samples do not
/// produce spurious scores; a larger difference with stderr 0 is infinite.
double z_score(double difference, double stderr_value);

}  // namespace levy::stats
