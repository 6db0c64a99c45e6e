#include "levy/jumprm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace levy {

std::vector<PRMAtom> PRMSample::timeline() const {
  std::vector<PRMAtom> out = atoms;
  std::stable_sort(out.begin(), out.end(), [](const PRMAtom& a, const PRMAtom& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.shell < b.shell;
  });
  return out;
}

long PRMSample::count(double t1, double t2, ShellIndex n) const {
  return std::count_if(atoms.begin(), atoms.end(), [&](const PRMAtom& a) {
    return a.shell == n && a.time > t1 && a.time <= t2;
  });
}

PRMSample sample_prm(const LevyMeasure& nu, const BanachDisk& disk, double horizon,
                     int shell_cutoff, const StreamFactory& streams, std::uint64_t replica) {
  require(horizon > 0.0 && std::isfinite(horizon), "sample_prm: horizon must be positive");
  require(shell_cutoff >= 1, "sample_prm: shell cutoff must be >= 1");
  PRMSample prm;
  prm.dim = nu.dim();
  prm.horizon = horizon;
  prm.shell_cutoff = shell_cutoff;
  for (int n = 0; n <= shell_cutoff; ++n) {
    const ShellIndex shell{n};
    const double mass = shell_mass(nu, disk, shell);
    if (!(mass > 0.0)) continue;
    Rng rng = streams.derive(replica, StreamComponent::kPoisson, static_cast<std::uint64_t>(n));
    std::poisson_distribution<long> counter(horizon * mass);
    const long count = counter(rng);
    std::vector<PRMAtom> shell_atoms;
    shell_atoms.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      const double t = horizon * uniform_open_closed(rng);
      shell_atoms.push_back({t, sample_shell(nu, disk, shell, rng), shell});
    }
    std::stable_sort(shell_atoms.begin(), shell_atoms.end(),
                     [](const PRMAtom& a, const PRMAtom& b) { return a.time < b.time; });
    for (auto& a : shell_atoms) prm.atoms.push_back(std::move(a));
  }
  return prm;
}

void validate_prm(const PRMSample& prm, const BanachDisk& disk) {
  require(prm.dim == disk.dim(), "PRMSample: dimension mismatch");
  for (const auto& a : prm.atoms) {
    require(a.time > 0.0 && a.time <= prm.horizon, "PRMSample: atom time outside (0, horizon]");
    require(!a.mark.isZero(0.0), "PRMSample: atom mark at the origin");
    require(shell_index(a.mark, disk) == a.shell, "PRMSample: stored shell disagrees with mark");
    require(a.shell.n <= prm.shell_cutoff, "PRMSample: atom beyond the shell cutoff");
  }
}

Vector large_jump_process(const PRMSample& prm, double t) {
  require(t >= 0.0 && t <= prm.horizon, "large_jump_process: time outside [0, horizon]");
  Vector sum = Vector::Zero(prm.dim);
  for (const auto& a : prm.timeline())
    if (a.shell.n == 0 && a.time <= t) sum += a.mark;
  return sum;
}

Vector compensated_shell_term(const PRMSample& prm, const LevyMeasure& nu, const BanachDisk& disk,
                              int n, double t) {
  require(n >= 1, "compensated_shell_term: shell must be >= 1");
  require(n <= prm.shell_cutoff, "compensated_shell_term: shell beyond the simulated cutoff");
  require(t >= 0.0 && t <= prm.horizon, "compensated_shell_term: time outside [0, horizon]");
  Vector sum = Vector::Zero(nu.dim());
  for (const auto& a : prm.atoms)
    if (a.shell.n == n && a.time <= t) sum += a.mark;
  return sum - t * shell_compensator(nu, disk, ShellIndex{n});
}

TruncatedCompensatedSum::TruncatedCompensatedSum(std::vector<PRMAtom> jumps,
                                                 std::vector<Vector> compensators,
                                                 Eigen::Index dim)
    : jumps_(std::move(jumps)), compensators_(std::move(compensators)), dim_(dim) {
  require(std::is_sorted(jumps_.begin(), jumps_.end(),
                         [](const PRMAtom& a, const PRMAtom& b) { return a.time < b.time; }),
          "TruncatedCompensatedSum: jumps must be time-ordered");
  drift_ = Vector::Zero(dim_);
  for (const auto& c : compensators_) drift_ += c;
}

TruncatedCompensatedSum TruncatedCompensatedSum::from_prm(const PRMSample& prm,
                                                          const LevyMeasure& nu,
                                                          const BanachDisk& disk, int level) {
  require(level >= 0 && level <= prm.shell_cutoff,
          "TruncatedCompensatedSum: level beyond the simulated cutoff");
  std::vector<PRMAtom> jumps;
  for (auto& a : prm.timeline())
    if (a.shell.n >= 1 && a.shell.n <= level) jumps.push_back(std::move(a));
  std::vector<Vector> comps;
  for (int n = 1; n <= level; ++n) comps.push_back(shell_compensator(nu, disk, ShellIndex{n}));
  return TruncatedCompensatedSum(std::move(jumps), std::move(comps), nu.dim());
}

namespace {

template <typename Pred>
Vector sum_marks(const std::vector<PRMAtom>& jumps, Eigen::Index dim, Pred take) {
  Vector sum = Vector::Zero(dim);
  for (const auto& a : jumps) {
    if (!take(a.time)) break;
    sum += a.mark;
  }
  return sum;
}

}  // namespace

Vector TruncatedCompensatedSum::value(double t) const {
  return sum_marks(jumps_, dim_, [t](double s) { return s <= t; }) - t * drift_;
}

Vector TruncatedCompensatedSum::left_limit(double t) const {
  return sum_marks(jumps_, dim_, [t](double s) { return s < t; }) - t * drift_;
}

CadlagPath TruncatedCompensatedSum::path(const std::vector<double>& grid) const {
  std::vector<Jump> jumps;
  jumps.reserve(jumps_.size());
  for (const auto& a : jumps_) jumps.push_back({a.time, a.mark});
  return CadlagPath::assemble(grid, jumps, [this](double t) { return value(t); });
}

CompensatedSeriesResult compensated_series(const PRMSample& prm, const LevyMeasure& nu,
                                           const BanachDisk& disk, std::vector<int> levels,
                                           std::vector<double> eval_times) {
  require(!levels.empty(), "compensated_series: no truncation levels");
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  require(levels.front() >= 1, "compensated_series: levels must be >= 1");
  require(levels.back() <= prm.shell_cutoff,
          "compensated_series: truncation level exceeds the simulated shell cutoff");
  for (double t : eval_times)
    require(t >= 0.0 && t <= prm.horizon, "compensated_series: evaluation time outside horizon");

  // The sup of a piecewise-linear gap is attained at jump times (from
  // either side) or at the ends, so those are always evaluated.
  eval_times.push_back(0.0);
  eval_times.push_back(prm.horizon);
  for (const auto& a : prm.atoms)
    if (a.shell.n >= 1) eval_times.push_back(a.time);
  std::sort(eval_times.begin(), eval_times.end());
  eval_times.erase(std::unique(eval_times.begin(), eval_times.end()), eval_times.end());

  CompensatedSeriesResult result;
  result.levels = levels;
  result.eval_times = eval_times;
  std::map<int, TruncatedCompensatedSum> sums;
  for (int level : levels) {
    auto sum = TruncatedCompensatedSum::from_prm(prm, nu, disk, level);
    auto& values = result.partial_sums[level];
    values.reserve(eval_times.size());
    for (double t : eval_times) values.push_back(sum.value(t));
    sums.emplace(level, std::move(sum));
    result.tail_variance_bound[level] = prm.horizon * second_moment_tail(nu, disk, level);
  }
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const int lo = levels[i];
    const int hi = levels[i + 1];
    const auto& a = result.partial_sums[lo];
    const auto& b = result.partial_sums[hi];
    double sup = 0.0;
    for (std::size_t k = 0; k < eval_times.size(); ++k) {
      sup = std::max(sup, gauge_norm(b[k] - a[k], disk));
      if (eval_times[k] > 0.0) {
        const Vector left = sums.at(hi).left_limit(eval_times[k]) - sums.at(lo).left_limit(eval_times[k]);
        sup = std::max(sup, gauge_norm(left, disk));
      }
    }
    result.sup_gaps[{lo, hi}] = sup;
  }
  return result;
}

}  // namespace levy
