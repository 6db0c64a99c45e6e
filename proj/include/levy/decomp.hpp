#pragma once

// Levy-Ito synthesis X_t = gamma t + W_t + J_t + L_t, the inverse analysis
// of a path with explicit jumps into (L, J, Y = X - L - J), and the
// statistical checks that go with it.

#include "levy/charfn.hpp"
#include "levy/gaussian.hpp"
#include "levy/jumprm.hpp"
#include "levy/paths.hpp"
#include "levy/rng.hpp"
#include "levy/stats.hpp"

#include <optional>
#include <string>
#include <vector>

namespace levy {

struct ComponentBundle {
  CadlagPath X;
  CadlagPath drift;
  CadlagPath W;
  CadlagPath J;
  CadlagPath L;
  PRMSample prm;
  int truncation = 0;

  /// Y = X - L - J at time t.
  Vector residual_at(double t) const;
};

/// Reusable synthesis plan for one set of characteristics and grid.
class Synthesizer {
 public:
  Synthesizer(Characteristics c, std::vector<double> grid, int shell_cutoff);

  /// Components draw from streams derived from (seed, replica): the Wiener
  /// part from kWiener, shell n of the Poisson measure from (kPoisson, n).
  ComponentBundle synthesize(const StreamFactory& streams, std::uint64_t replica) const;

  const Characteristics& characteristics() const { return c_; }
  const std::vector<double>& grid() const { return grid_; }
  int shell_cutoff() const { return shell_cutoff_; }

 private:
  Characteristics c_;
  std::vector<double> grid_;
  int shell_cutoff_;
  WienerSampler wiener_;
  std::vector<Vector> compensators_;
};

ComponentBundle synthesize(const Characteristics& c, const std::vector<double>& grid,
                           int shell_cutoff, const StreamFactory& streams, std::uint64_t replica);

struct Analysis {
  CadlagPath L;
  CadlagPath J;
  CadlagPath Y;
};

/// L sums the jumps outside K, J the compensated jumps in shells 1..N, and
/// Y = X - L - J keeps only jumps in shells beyond N.
Analysis analyze(const CadlagPath& X, const BanachDisk& disk, const LevyMeasure& nu,
                 int truncation);

enum class Transform { kLinear, kCos, kSin };
std::string to_string(Transform t);

struct IndependenceStat {
  std::size_t functional_index = 0;
  Transform transform = Transform::kLinear;
  std::string pair;  // "J-L", "J-Y" or "L-Y"
  stats::Correlation correlation;
};

/// Correlations of f(<J_t,a>), f(<L_t,a>), f(<Y_t,a>) for every pair of
/// components, every functional and every transform f.
std::vector<IndependenceStat> independence_check(const std::vector<ComponentBundle>& bundles,
                                                 const std::vector<Vector>& functionals,
                                                 double t);
/// Same on pre-evaluated component values J_t, L_t, Y_t per replica.
std::vector<IndependenceStat> independence_check(const std::vector<Vector>& J,
                                                 const std::vector<Vector>& L,
                                                 const std::vector<Vector>& Y,
                                                 const std::vector<Vector>& functionals);

double apply_transform(Transform f, double x);

struct GaussianityResult {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double z_skewness = 0.0;
  double z_kurtosis = 0.0;
};

/// Sample skewness and excess kurtosis of <y - mean, a> with their
/// standard errors under normality. Needs >= 1000 samples; throws
/// DegenerateSample when the projection has no variance.
GaussianityResult gaussianity_check(const std::vector<Vector>& samples, const Vector& functional);
GaussianityResult moment_check(std::span<const double> values);

struct ReducibilityLevel {
  int level = 0;
  Vector shift;
  int m = 0;
  double mass_inside = 0.0;  // achieved (lower confidence bound for Monte Carlo)
  std::string method;         // "series" or "monte_carlo"
};

struct ReducibilityReport {
  double epsilon = 0.0;
  std::vector<ReducibilityLevel> levels;
  /// True when the smallest radius m agrees on the two deepest levels.
  bool monotone_flag = true;
};

struct ReducibilityOptions {
  std::uint64_t seed = 1;
  long mc_samples = 20000;
  double series_tolerance = 1e-12;
  int max_radius = 1000;
};

/// For each level, rho = nu restricted to shells 1..level and
/// x_rho = -int x drho: the smallest integer m with
/// (e(rho) * delta_{x_rho})(m K) > 1 - eps.
ReducibilityReport reducibility_check(const LevyMeasure& nu, const BanachDisk& disk, double epsilon,
                                      const std::vector<int>& truncation_levels,
                                      const ReducibilityOptions& options = {});

}  // namespace levy
