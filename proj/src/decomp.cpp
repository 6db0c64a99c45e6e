#include "levy/decomp.hpp"

#include <algorithm>
#include <cmath>

namespace levy {

Vector ComponentBundle::residual_at(double t) const {
  return X.value_at(t) - L.value_at(t) - J.value_at(t);
}

Synthesizer::Synthesizer(Characteristics c, std::vector<double> grid, int shell_cutoff)
    : c_(std::move(c)),
      grid_(std::move(grid)),
      shell_cutoff_(shell_cutoff),
      wiener_(c_.covariance(), grid_) {
  require(shell_cutoff_ >= 1, "Synthesizer: shell cutoff must be >= 1");
}

ComponentBundle Synthesizer::synthesize(const StreamFactory& streams,
                                        std::uint64_t replica) const {
  const auto d = c_.dim();
  const double horizon = grid_.back();

  Rng wiener_rng = streams.derive(replica, StreamComponent::kWiener);
  CadlagPath W = sample_wiener_path(wiener_, wiener_rng);

  PRMSample prm = sample_prm(c_.nu(), c_.disk(), horizon, shell_cutoff_, streams, replica);

  std::vector<PRMAtom> outer;
  for (auto& a : prm.timeline())
    if (a.shell.n == 0) outer.push_back(std::move(a));
  const TruncatedCompensatedSum large(std::move(outer), {}, d);
  const auto small = TruncatedCompensatedSum::from_prm(prm, c_.nu(), c_.disk(), shell_cutoff_);
  CadlagPath L = large.path(grid_);
  CadlagPath J = small.path(grid_);

  std::vector<Vector> drift_values;
  drift_values.reserve(grid_.size());
  for (double t : grid_) drift_values.push_back(t * c_.gamma());
  CadlagPath drift = CadlagPath::continuous(grid_, drift_values);

  std::vector<Jump> jumps;
  for (const auto& a : prm.timeline()) jumps.push_back({a.time, a.mark});
  CadlagPath X = CadlagPath::assemble(grid_, jumps, [&](double t) -> Vector {
    return drift.value_at(t) + W.value_at(t) + J.value_at(t) + L.value_at(t);
  });

  return ComponentBundle{std::move(X), std::move(drift), std::move(W), std::move(J),
                         std::move(L), std::move(prm), shell_cutoff_};
}

ComponentBundle synthesize(const Characteristics& c, const std::vector<double>& grid,
                           int shell_cutoff, const StreamFactory& streams, std::uint64_t replica) {
  return Synthesizer(c, grid, shell_cutoff).synthesize(streams, replica);
}

Analysis analyze(const CadlagPath& X, const BanachDisk& disk, const LevyMeasure& nu,
                 int truncation) {
  require(X.dim() == disk.dim() && nu.dim() == disk.dim(), "analyze: inconsistent dimensions");
  require(truncation >= 0, "analyze: truncation must be nonnegative");
  const auto d = X.dim();
  std::vector<PRMAtom> outer;
  std::vector<PRMAtom> inner;
  for (const auto& k : X.knots()) {
    if (!k.has_jump) continue;
    const ShellIndex n = shell_index(k.delta, disk);
    if (n.n == 0)
      outer.push_back({k.time, k.delta, n});
    else if (n.n <= truncation)
      inner.push_back({k.time, k.delta, n});
  }
  std::vector<Vector> comps;
  for (int n = 1; n <= truncation; ++n) comps.push_back(shell_compensator(nu, disk, ShellIndex{n}));

  const auto grid = X.grid();
  const TruncatedCompensatedSum large(std::move(outer), {}, d);
  const TruncatedCompensatedSum small(std::move(inner), std::move(comps), d);
  CadlagPath L = large.path(grid);
  CadlagPath J = small.path(grid);

  std::vector<Knot> knots;
  knots.reserve(X.knots().size());
  for (const auto& k : X.knots()) {
    Knot y;
    y.time = k.time;
    y.on_grid = k.on_grid;
    y.value = k.value - L.value_at(k.time) - J.value_at(k.time);
    y.delta = Vector::Zero(d);
    if (k.has_jump && shell_index(k.delta, disk).n > truncation) {
      y.delta = k.delta;
      y.has_jump = true;
    }
    knots.push_back(std::move(y));
  }
  return {std::move(L), std::move(J), CadlagPath(std::move(knots))};
}

std::string to_string(Transform t) {
  switch (t) {
    case Transform::kLinear: return "linear";
    case Transform::kCos: return "cos";
    case Transform::kSin: return "sin";
  }
  return "unknown";
}

double apply_transform(Transform f, double x) {
  switch (f) {
    case Transform::kLinear: return x;
    case Transform::kCos: return std::cos(x);
    case Transform::kSin: return std::sin(x);
  }
  return x;
}

std::vector<IndependenceStat> independence_check(const std::vector<ComponentBundle>& bundles,
                                                 const std::vector<Vector>& functionals,
                                                 double t) {
  require(bundles.size() >= 100, "independence_check: need at least 100 bundles");
  const auto n = bundles.size();
  std::vector<Vector> J(n), L(n), Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    J[i] = bundles[i].J.value_at(t);
    L[i] = bundles[i].L.value_at(t);
    Y[i] = bundles[i].X.value_at(t) - L[i] - J[i];
  }
  return independence_check(J, L, Y, functionals);
}

std::vector<IndependenceStat> independence_check(const std::vector<Vector>& J,
                                                 const std::vector<Vector>& L,
                                                 const std::vector<Vector>& Y,
                                                 const std::vector<Vector>& functionals) {
  require(J.size() >= 100, "independence_check: need at least 100 replicas");
  require(L.size() == J.size() && Y.size() == J.size(), "independence_check: size mismatch");
  require(!functionals.empty(), "independence_check: no functionals");
  const auto n = J.size();
  std::vector<IndependenceStat> out;
  for (std::size_t f = 0; f < functionals.size(); ++f) {
    const auto& a = functionals[f];
    for (auto transform : {Transform::kLinear, Transform::kCos, Transform::kSin}) {
      std::vector<double> j(n), l(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        j[i] = apply_transform(transform, J[i].dot(a));
        l[i] = apply_transform(transform, L[i].dot(a));
        y[i] = apply_transform(transform, Y[i].dot(a));
      }
      out.push_back({f, transform, "J-L", stats::correlation(j, l)});
      out.push_back({f, transform, "J-Y", stats::correlation(j, y)});
      out.push_back({f, transform, "L-Y", stats::correlation(l, y)});
    }
  }
  return out;
}

GaussianityResult moment_check(std::span<const double> values) {
  require(values.size() >= 1000, "gaussianity_check: need at least 1000 samples");
  const double n = static_cast<double>(values.size());
  const double mu = stats::mean(values);
  std::vector<double> c2(values.size()), c3(values.size()), c4(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mu;
    c2[i] = d * d;
    c3[i] = c2[i] * d;
    c4[i] = c2[i] * c2[i];
  }
  const double m2 = stats::pairwise_sum(c2) / n;
  const double m3 = stats::pairwise_sum(c3) / n;
  const double m4 = stats::pairwise_sum(c4) / n;
  if (!(m2 > 1e-24 * std::max(1.0, mu * mu)))
    throw DegenerateSample("gaussianity_check: projection has no variance");
  GaussianityResult r;
  r.skewness = m3 / std::pow(m2, 1.5);
  r.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  const double se_skew = std::sqrt(6.0 * n * (n - 1.0) / ((n - 2.0) * (n + 1.0) * (n + 3.0)));
  const double se_kurt = 2.0 * se_skew * std::sqrt((n * n - 1.0) / ((n - 3.0) * (n + 5.0)));
  r.z_skewness = r.skewness / se_skew;
  r.z_kurtosis = r.excess_kurtosis / se_kurt;
  return r;
}

GaussianityResult gaussianity_check(const std::vector<Vector>& samples, const Vector& functional) {
  std::vector<double> projected(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require_same_dim(samples[i], functional, "gaussianity_check");
    projected[i] = samples[i].dot(functional);
  }
  return moment_check(projected);
}

namespace {

ReducibilityLevel series_level(const LevyMeasure& nu, const BanachDisk& disk, double epsilon,
                               int level, const ReducibilityOptions& options) {
  const LevyMeasure rho = nu.restricted_to_shells(disk, 1, level);
  ReducibilityLevel out;
  out.level = level;
  out.method = "series";
  out.shift = Vector::Zero(nu.dim());
  for (int n = 1; n <= level; ++n) out.shift -= shell_compensator(rho, disk, ShellIndex{n});

  const double mass = rho.total_mass();
  int cutoff = 0;
  while (poisson_tail(mass, cutoff) > options.series_tolerance) {
    if (++cutoff > 10000) throw BudgetExceeded("reducibility_check: series cutoff budget exceeded");
  }
  const auto law = poisson_exponential_finite(rho, cutoff, options.series_tolerance);
  for (int m = 1; m <= options.max_radius; ++m) {
    const double inside = law.mass_in_scaled_disk(disk, m, out.shift);
    if (inside > 1.0 - epsilon) {
      out.m = m;
      out.mass_inside = inside;
      return out;
    }
  }
  throw BudgetExceeded("reducibility_check: no radius up to max_radius reaches 1 - eps");
}

// Wilson score lower bound at z = 3.
double wilson_lower(double successes, double trials) {
  constexpr double z = 3.0;
  const double p = successes / trials;
  const double denom = 1.0 + z * z / trials;
  const double centre = p + z * z / (2.0 * trials);
  const double spread = z * std::sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials));
  return (centre - spread) / denom;
}

ReducibilityLevel monte_carlo_level(const LevyMeasure& nu, const BanachDisk& disk, double epsilon,
                                    int level, const ReducibilityOptions& options) {
  ReducibilityLevel out;
  out.level = level;
  out.method = "monte_carlo";
  out.shift = Vector::Zero(nu.dim());
  std::vector<double> masses;
  for (int n = 1; n <= level; ++n) {
    out.shift -= shell_compensator(nu, disk, ShellIndex{n});
    masses.push_back(shell_mass(nu, disk, ShellIndex{n}));
  }
  Rng rng = StreamFactory(options.seed).derive(static_cast<std::uint64_t>(level),
                                               StreamComponent::kReducibility);
  std::vector<double> gauges(static_cast<std::size_t>(options.mc_samples));
  for (auto& g : gauges) {
    Vector x = out.shift;
    for (int n = 1; n <= level; ++n) {
      const double m = masses[static_cast<std::size_t>(n - 1)];
      if (!(m > 0.0)) continue;
      const long count = std::poisson_distribution<long>(m)(rng);
      for (long i = 0; i < count; ++i) x += sample_shell(nu, disk, ShellIndex{n}, rng);
    }
    g = gauge_norm(x, disk);
  }
  std::sort(gauges.begin(), gauges.end());
  const double trials = static_cast<double>(gauges.size());
  for (int m = 1; m <= options.max_radius; ++m) {
    const auto inside = std::upper_bound(gauges.begin(), gauges.end(), m * (1.0 + 1e-12)) -
                        gauges.begin();
    const double lower = wilson_lower(static_cast<double>(inside), trials);
    if (lower > 1.0 - epsilon) {
      out.m = m;
      out.mass_inside = lower;
      return out;
    }
    if (inside == static_cast<long>(gauges.size())) break;
  }
  throw BudgetExceeded("reducibility_check: Monte Carlo budget too small to certify 1 - eps");
}

}  // namespace

ReducibilityReport reducibility_check(const LevyMeasure& nu, const BanachDisk& disk, double epsilon,
                                      const std::vector<int>& truncation_levels,
                                      const ReducibilityOptions& options) {
  require(epsilon > 0.0 && epsilon < 1.0, "reducibility_check: epsilon must lie in (0, 1)");
  require(!truncation_levels.empty(), "reducibility_check: no truncation levels");
  require(nu.dim() == disk.dim(), "reducibility_check: dimension mismatch");
  require(options.mc_samples >= 100, "reducibility_check: too few Monte Carlo samples");
  std::vector<int> levels = truncation_levels;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  require(levels.front() >= 1, "reducibility_check: truncation levels must be >= 1");

  ReducibilityReport report;
  report.epsilon = epsilon;
  for (int level : levels) {
    report.levels.push_back(nu.is_atomic()
                                ? series_level(nu, disk, epsilon, level, options)
                                : monte_carlo_level(nu, disk, epsilon, level, options));
  }
  const auto k = report.levels.size();
  report.monotone_flag = k < 2 || report.levels[k - 1].m == report.levels[k - 2].m;
  return report;
}

}  // namespace levy
