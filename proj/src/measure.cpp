#include "levy/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace levy {
namespace {

// Neumaier-compensated running sum; exact cancellation for mirrored terms.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      carry_ += (sum_ - t) + v;
    else
      carry_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

GaugeInterval radial_interval(const LevyMeasure& nu, ShellIndex n) {
  if (n.n == 0) return {1.0, nu.radial().outer_radius};
  return shell_gauge_interval(n.n);
}

void check_disk(const LevyMeasure& nu, const BanachDisk& disk) {
  if (nu.dim() != disk.dim()) throw InvalidArgument("Levy measure and disk dimensions differ");
}

}  // namespace

LevyMeasure LevyMeasure::zero(Eigen::Index dim) { return atomic(dim, {}); }

LevyMeasure LevyMeasure::atomic(Eigen::Index dim, std::vector<Atom> atoms) {
  require(dim >= 1, "LevyMeasure: dimension must be positive");
  LevyMeasure m;
  m.kind_ = Kind::kAtomic;
  m.dim_ = dim;
  for (const auto& a : atoms) {
    require(a.point.size() == dim, "LevyMeasure: atom dimension mismatch");
    require(std::isfinite(a.mass) && a.mass > 0.0, "LevyMeasure: atom masses must be positive");
    require(a.point.allFinite(), "LevyMeasure: atom coordinates must be finite");
    require(!a.point.isZero(0.0), "LevyMeasure: the origin cannot carry mass");
  }
  m.atoms_ = std::move(atoms);
  return m;
}

LevyMeasure LevyMeasure::radial_shell(RadialShellParams params) {
  require(params.dim >= 1, "LevyMeasure: dimension must be positive");
  require(std::isfinite(params.scale) && params.scale >= 0.0,
          "LevyMeasure: radial scale must be nonnegative");
  require(std::isfinite(params.exponent) && params.exponent < 1.0,
          "LevyMeasure: radial exponent must be < 1 for a finite small-jump second moment");
  require(std::isfinite(params.outer_mass) && params.outer_mass >= 0.0,
          "LevyMeasure: outer mass must be finite and nonnegative");
  require(std::isfinite(params.outer_radius) && params.outer_radius > 1.0,
          "LevyMeasure: outer radius must exceed 1");
  for (const auto& d : params.directions) {
    require(d.size() == params.dim, "LevyMeasure: direction dimension mismatch");
    require(d.allFinite() && !d.isZero(0.0), "LevyMeasure: directions must be finite and nonzero");
  }
  if (!params.direction_weights.empty()) {
    require(params.direction_weights.size() == params.directions.size(),
            "LevyMeasure: one weight per direction required");
    for (double w : params.direction_weights)
      require(std::isfinite(w) && w > 0.0, "LevyMeasure: direction weights must be positive");
  }
  LevyMeasure m;
  m.kind_ = Kind::kRadialShell;
  m.dim_ = params.dim;
  m.radial_ = std::move(params);
  return m;
}

double LevyMeasure::radial_shell_mass(int n) const {
  require(n >= 1, "radial_shell_mass: shell must be >= 1");
  return radial_.scale * std::pow(static_cast<double>(n), radial_.exponent);
}

bool LevyMeasure::has_finite_mass() const {
  if (kind_ == Kind::kAtomic) return true;
  return radial_.scale == 0.0 || radial_.exponent < -1.0;
}

double LevyMeasure::total_mass() const {
  if (kind_ == Kind::kAtomic) {
    CompensatedSum s;
    for (const auto& a : atoms_) s.add(a.mass);
    return s.value();
  }
  if (!has_finite_mass()) return kInfinity;
  if (radial_.scale == 0.0) return radial_.outer_mass;
  // sum_n n^p for p < -1: explicit head plus integral tail with midpoint
  // correction.
  const double p = radial_.exponent;
  constexpr int kHead = 100000;
  double head = 0.0;
  for (int n = kHead; n >= 1; --n) head += std::pow(static_cast<double>(n), p);
  const double x = kHead + 0.5;
  const double tail = std::pow(x, p + 1.0) / (-p - 1.0);
  return radial_.outer_mass + radial_.scale * (head + tail);
}

int LevyMeasure::deepest_shell(const BanachDisk& disk) const {
  check_disk(*this, disk);
  require(kind_ == Kind::kAtomic, "deepest_shell: only defined for atomic measures");
  int deepest = 0;
  for (const auto& a : atoms_) deepest = std::max(deepest, shell_index(a.point, disk).n);
  return deepest;
}

LevyMeasure LevyMeasure::restricted_to_shells(const BanachDisk& disk, int first, int last) const {
  check_disk(*this, disk);
  require(kind_ == Kind::kAtomic, "restricted_to_shells: only defined for atomic measures");
  std::vector<Atom> kept;
  for (const auto& a : atoms_) {
    const int n = shell_index(a.point, disk).n;
    if (n >= first && n <= last) kept.push_back(a);
  }
  return atomic(dim_, std::move(kept));
}

DirectionSet radial_directions(const LevyMeasure& nu, const BanachDisk& disk) {
  check_disk(nu, disk);
  require(!nu.is_atomic(), "radial_directions: measure is atomic");
  const auto& params = nu.radial();
  DirectionSet set;
  if (params.directions.empty()) {
    for (Eigen::Index i = 0; i < disk.dim(); ++i) {
      Vector u = Vector::Zero(disk.dim());
      u[i] = disk.radii()[i];
      set.directions.push_back(u);
      set.directions.push_back(-u);
    }
  } else {
    for (const auto& d : params.directions) set.directions.push_back(d / gauge_norm(d, disk));
  }
  const auto count = set.directions.size();
  if (params.direction_weights.empty()) {
    set.probabilities.assign(count, 1.0 / static_cast<double>(count));
  } else {
    double total = 0.0;
    for (double w : params.direction_weights) total += w;
    for (double w : params.direction_weights) set.probabilities.push_back(w / total);
  }
  return set;
}

double shell_mass(const LevyMeasure& nu, const BanachDisk& disk, ShellIndex n) {
  check_disk(nu, disk);
  require(n.n >= 0, "shell_mass: negative shell index");
  if (nu.is_atomic()) {
    CompensatedSum s;
    for (const auto& a : nu.atoms())
      if (shell_index(a.point, disk) == n) s.add(a.mass);
    return s.value();
  }
  if (n.n == 0) return nu.radial().outer_mass;
  return nu.radial_shell_mass(n.n);
}

Vector shell_compensator(const LevyMeasure& nu, const BanachDisk& disk, ShellIndex n) {
  check_disk(nu, disk);
  if (n.n < 1) throw InvalidArgument("shell_compensator: no compensation outside K (shell 0)");
  const auto d = nu.dim();
  Vector out(d);
  if (nu.is_atomic()) {
    for (Eigen::Index i = 0; i < d; ++i) {
      CompensatedSum s;
      for (const auto& a : nu.atoms())
        if (shell_index(a.point, disk) == n) s.add(a.mass * a.point[i]);
      out[i] = s.value();
    }
    return out;
  }
  const auto dirs = radial_directions(nu, disk);
  const auto [lo, hi] = shell_gauge_interval(n.n);
  const double mean_radius = 0.5 * (lo + hi);
  const double mass = nu.radial_shell_mass(n.n);
  for (Eigen::Index i = 0; i < d; ++i) {
    CompensatedSum s;
    for (std::size_t j = 0; j < dirs.directions.size(); ++j)
      s.add(dirs.probabilities[j] * dirs.directions[j][i]);
    out[i] = mass * mean_radius * s.value();
  }
  return out;
}

double shell_second_moment(const LevyMeasure& nu, const BanachDisk& disk, ShellIndex n) {
  check_disk(nu, disk);
  require(n.n >= 1, "shell_second_moment: shell must be >= 1");
  if (nu.is_atomic()) {
    CompensatedSum s;
    for (const auto& a : nu.atoms()) {
      if (shell_index(a.point, disk) != n) continue;
      const double g = gauge_norm(a.point, disk);
      s.add(a.mass * g * g);
    }
    return s.value();
  }
  const auto [lo, hi] = shell_gauge_interval(n.n);
  return nu.radial_shell_mass(n.n) * (lo * lo + lo * hi + hi * hi) / 3.0;
}

double second_moment_tail(const LevyMeasure& nu, const BanachDisk& disk, int level) {
  check_disk(nu, disk);
  require(level >= 0, "second_moment_tail: level must be nonnegative");
  if (nu.is_atomic()) {
    CompensatedSum s;
    for (const auto& a : nu.atoms()) {
      if (shell_index(a.point, disk).n <= level) continue;
      const double g = gauge_norm(a.point, disk);
      s.add(a.mass * g * g);
    }
    return s.value();
  }
  return radial_moment_tail(nu, 2, level);
}

double radial_moment_tail(const LevyMeasure& nu, int order, int level) {
  require(!nu.is_atomic(), "radial_moment_tail: measure is atomic");
  require(order >= 1 && level >= 0, "radial_moment_tail: need order >= 1, level >= 0");
  const double c = nu.radial().scale;
  if (c == 0.0) return 0.0;
  const double p = nu.radial().exponent;
  const double k = order;
  require(p < k - 1.0, "radial_moment_tail: series diverges for this exponent");
  // With x = 1/n,
  //   f(n) = n^p E_n[r^k] = n^{p-k} (1 - (k/2) x + k(k+2)/6 x^2 + O(x^3)).
  // Explicit head, then sum_{n>M} f(n) = int_X^inf f + f'(X)/24 + ...,
  // X = M + 1/2, with error O(X^{p-k-2}).
  constexpr long kHead = 4000;
  const long last = static_cast<long>(level) + kHead;
  double sum = 0.0;
  for (long n = last; n > level; --n) {
    const double lo = 1.0 / static_cast<double>(n + 1);
    const double hi = 1.0 / static_cast<double>(n);
    const double mean_power = (std::pow(hi, k + 1.0) - std::pow(lo, k + 1.0)) / ((k + 1.0) * (hi - lo));
    sum += std::pow(static_cast<double>(n), p) * mean_power;
  }
  const double x = static_cast<double>(last) + 0.5;
  const double q = p - k;
  const double tail = std::pow(x, q + 1.0) / (-q - 1.0) - 0.5 * k * std::pow(x, q) / (-q) +
                      std::pow(x, q - 1.0) * (k * (k + 2.0) / 6.0 / (1.0 - q) + q / 24.0);
  return c * (sum + tail);
}

Complex radial_shell_series(const LevyMeasure& nu, const BanachDisk& disk,
                            const Vector& functional, int first, int last, int order,
                            double tolerance) {
  check_disk(nu, disk);
  require(!nu.is_atomic(), "radial_shell_series: measure is atomic");
  require(functional.size() == nu.dim(), "radial_shell_series: dimension mismatch");
  require(first >= 1, "radial_shell_series: shells start at 1");
  require(order == 1 || order == 2, "radial_shell_series: order must be 1 or 2");
  require(tolerance > 0.0, "radial_shell_series: tolerance must be positive");
  const double c = nu.radial().scale;
  if (c == 0.0 || (last >= 0 && last < first)) return {0.0, 0.0};
  const double p = nu.radial().exponent;

  const auto dirs = radial_directions(nu, disk);
  std::vector<double> proj;
  double widest = 0.0;
  for (const auto& u : dirs.directions) {
    proj.push_back(u.dot(functional));
    widest = std::max(widest, std::abs(proj.back()));
  }
  if (widest == 0.0) return {0.0, 0.0};

  const auto& rule = gauss_legendre16();
  const auto phi = [order](double theta) {
    Complex v = std::exp(Complex(0.0, theta)) - 1.0;
    if (order == 2) v -= Complex(0.0, theta);
    return v;
  };
  const auto shell_term = [&](long n) {
    const double lo = 1.0 / static_cast<double>(n + 1);
    const double hi = 1.0 / static_cast<double>(n);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    Complex sum{0.0, 0.0};
    for (std::size_t j = 0; j < proj.size(); ++j) {
      Complex radial{0.0, 0.0};
      for (int q = 0; q < 16; ++q) radial += 0.5 * rule.weights[q] * phi((mid + half * rule.nodes[q]) * proj[j]);
      sum += dirs.probabilities[j] * radial;
    }
    return c * std::pow(static_cast<double>(n), p) * sum;
  };

  Complex total{0.0, 0.0};
  if (last >= 0) {
    for (long n = first; n <= last; ++n) total += shell_term(n);
    return total;
  }

  // On shell n, |theta| <= widest / n, so the order-5 Taylor remainder of
  // the shells beyond N is at most
  //   c widest^5 / 120 * sum_{n>N} n^{p-5} <= c widest^5 N^{p-4} / (120 (4 - p)).
  const double target = 0.5 * tolerance * 120.0 * (4.0 - p) / (c * std::pow(widest, 5.0));
  const double needed = std::ceil(std::pow(target, 1.0 / (p - 4.0)));
  constexpr double kMaxShells = 2e7;
  if (!(needed <= kMaxShells))
    throw BudgetExceeded("radial_shell_series: more than " + std::to_string(long(kMaxShells)) +
                         " shells needed for the requested tolerance");
  const long head_end = std::max(static_cast<long>(first) - 1, static_cast<long>(needed));
  for (long n = first; n <= head_end; ++n) total += shell_term(n);

  // Remaining shells through e^{it} = sum_k (it)^k / k!, k = order..4.
  Complex unit{1.0, 0.0};
  double factorial = 1.0;
  for (int k = 1; k <= 4; ++k) {
    unit *= Complex(0.0, 1.0);
    factorial *= k;
    if (k < order) continue;
    double moment = 0.0;
    for (std::size_t j = 0; j < proj.size(); ++j) moment += dirs.probabilities[j] * std::pow(proj[j], k);
    total += unit / factorial * moment * radial_moment_tail(nu, k, static_cast<int>(head_end));
  }
  return total;
}

Vector sample_shell(const LevyMeasure& nu, const BanachDisk& disk, ShellIndex n, Rng& rng) {
  check_disk(nu, disk);
  const double mass = shell_mass(nu, disk, n);
  if (!(mass > 0.0)) throw InvalidArgument("sample_shell: shell " + std::to_string(n.n) + " is empty");

  if (nu.is_atomic()) {
    double target = uniform_open_closed(rng) * mass;
    const Atom* chosen = nullptr;
    for (const auto& a : nu.atoms()) {
      if (shell_index(a.point, disk) != n) continue;
      chosen = &a;
      target -= a.mass;
      if (target <= 0.0) break;
    }
    return chosen->point;
  }

  const auto dirs = radial_directions(nu, disk);
  const auto [lo, hi] = radial_interval(nu, n);
  std::discrete_distribution<std::size_t> pick(dirs.probabilities.begin(), dirs.probabilities.end());
  // Rounding in r * u can push a draw across a shell boundary; such draws
  // are rejected.
  for (int attempt = 0; attempt < 64; ++attempt) {
    const auto& u = dirs.directions[pick(rng)];
    const double r = hi - (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    Vector x = r * u;
    if (r > lo && shell_index(x, disk) == n) return x;
  }
  throw Error("sample_shell: could not place a draw inside shell " + std::to_string(n.n));
}

const GaussLegendre16& gauss_legendre16() {
  static const GaussLegendre16 rule = [] {
    GaussLegendre16 r{};
    constexpr int m = 16;
    for (int i = 0; i < m; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= m; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[i] = x;
      r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

Complex integrate_shell(const LevyMeasure& nu, const BanachDisk& disk, ShellIndex n,
                        const std::function<Complex(const Vector&)>& f) {
  check_disk(nu, disk);
  if (nu.is_atomic()) {
    Complex total{0.0, 0.0};
    for (const auto& a : nu.atoms())
      if (shell_index(a.point, disk) == n) total += a.mass * f(a.point);
    return total;
  }
  const double mass = shell_mass(nu, disk, n);
  if (mass == 0.0) return {0.0, 0.0};
  const auto dirs = radial_directions(nu, disk);
  const auto [lo, hi] = radial_interval(nu, n);
  const auto& rule = gauss_legendre16();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Complex total{0.0, 0.0};
  for (std::size_t j = 0; j < dirs.directions.size(); ++j) {
    Complex radial{0.0, 0.0};
    for (int q = 0; q < 16; ++q)
      radial += 0.5 * rule.weights[q] * f((mid + half * rule.nodes[q]) * dirs.directions[j]);
    total += dirs.probabilities[j] * radial;
  }
  return mass * total;
}

double FiniteDistribution::total_probability() const {
  CompensatedSum s;
  for (double p : probabilities) s.add(p);
  return s.value();
}

Complex FiniteDistribution::characteristic_function(const Vector& functional) const {
  Complex total{0.0, 0.0};
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_same_dim(points[i], functional, "characteristic_function");
    total += probabilities[i] * std::exp(Complex(0.0, points[i].dot(functional)));
  }
  return total;
}

double FiniteDistribution::mass_in_scaled_disk(const BanachDisk& disk, double radius,
                                               const Vector& shift) const {
  const double limit = radius * (1.0 + 1e-12);
  CompensatedSum s;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (gauge_norm(points[i] + shift, disk) <= limit) s.add(probabilities[i]);
  return s.value();
}

Complex poisson_exponential_cf(const LevyMeasure& nu, const Vector& functional) {
  require(nu.is_atomic(), "poisson_exponential_cf: a disk is needed to integrate a radial measure");
  require(functional.size() == nu.dim(), "poisson_exponential_cf: dimension mismatch");
  Complex exponent{0.0, 0.0};
  for (const auto& a : nu.atoms())
    exponent += a.mass * (std::exp(Complex(0.0, a.point.dot(functional))) - 1.0);
  return std::exp(exponent);
}

Complex poisson_exponential_cf(const LevyMeasure& nu, const BanachDisk& disk,
                               const Vector& functional) {
  check_disk(nu, disk);
  require(functional.size() == nu.dim(), "poisson_exponential_cf: dimension mismatch");
  if (!nu.has_finite_mass())
    throw InvalidArgument("poisson_exponential_cf: measure has infinite total mass");
  if (nu.is_atomic()) return poisson_exponential_cf(nu, functional);

  const auto integrand = [&](const Vector& x) {
    return std::exp(Complex(0.0, x.dot(functional))) - 1.0;
  };
  Complex exponent = integrate_shell(nu, disk, ShellIndex{0}, integrand);
  exponent += radial_shell_series(nu, disk, functional, 1, -1, 1, 1e-12);
  return std::exp(exponent);
}

double poisson_tail(double mean, int cutoff) {
  require(mean >= 0.0 && std::isfinite(mean), "poisson_tail: mean must be finite and nonnegative");
  if (cutoff < 0) return 1.0;
  if (mean == 0.0) return 0.0;
  // Sum the upper tail directly from the cutoff to avoid 1 - cdf cancellation.
  double log_term = -mean + (cutoff + 1) * std::log(mean) - std::lgamma(cutoff + 2.0);
  double term = std::exp(log_term);
  double total = 0.0;
  for (int k = cutoff + 1; k < cutoff + 100000; ++k) {
    total += term;
    term *= mean / (k + 1.0);
    if (term < 1e-300 || (k > mean && term < total * 1e-18)) break;
  }
  return total;
}

FiniteDistribution poisson_exponential_finite(const LevyMeasure& nu, int series_cutoff,
                                              double tolerance) {
  require(nu.is_atomic(), "poisson_exponential_finite: requires an atomic measure");
  require(series_cutoff >= 0, "poisson_exponential_finite: cutoff must be nonnegative");
  const double total = nu.total_mass();
  const double neglected = poisson_tail(total, series_cutoff);
  if (neglected > tolerance)
    throw BudgetExceeded("poisson_exponential_finite: cutoff " + std::to_string(series_cutoff) +
                         " leaves Poisson tail " + std::to_string(neglected) + " above tolerance");

  const auto& atoms = nu.atoms();
  const std::size_t count = atoms.size();
  using Counts = std::vector<int>;
  // level[c] = (nu^{*k}/k!)({sum_j c_j x_j}) restricted to the multiset c,
  // built by the convolution recursion over k.
  std::map<Counts, double> level{{Counts(count, 0), std::exp(-total)}};
  std::map<Counts, double> all = level;
  for (int k = 1; k <= series_cutoff && count > 0; ++k) {
    std::map<Counts, double> next;
    for (const auto& [c, mass] : level) {
      for (std::size_t j = 0; j < count; ++j) {
        Counts d = c;
        ++d[j];
        next[d] += mass * atoms[j].mass / k;
      }
    }
    level = std::move(next);
    for (const auto& [c, mass] : level) all[c] += mass;
  }

  auto lexicographic = [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
  };
  std::map<Vector, double, decltype(lexicographic)> merged(lexicographic);
  for (const auto& [c, mass] : all) {
    Vector point = Vector::Zero(nu.dim());
    for (std::size_t j = 0; j < count; ++j) point += c[j] * atoms[j].point;
    merged[point] += mass;
  }

  FiniteDistribution out;
  for (const auto& [point, mass] : merged) {
    out.points.push_back(point);
    out.probabilities.push_back(mass);
  }
  return out;
}

}  // namespace levy
