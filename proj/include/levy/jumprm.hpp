#pragma once

// Poisson random measure with intensity (Lebesgue x nu) on (0, T] x E,
// generated shell by shell, and the two jump integrals built on it:
//   L_t = sum of atoms in (0,t] x K^c,
//   J_t = sum_{n>=1} ( sum of atoms in (0,t] x C_n  -  t * int_{C_n} x dnu ).

#include "levy/measure.hpp"
#include "levy/paths.hpp"
#include "levy/rng.hpp"
#include "levy/space.hpp"

#include <map>
#include <utility>
#include <vector>

namespace levy {

struct PRMAtom {
  double time = 0.0;
  Vector mark;
  ShellIndex shell;
};

struct PRMSample {
  Eigen::Index dim = 0;
  double horizon = 0.0;
  int shell_cutoff = 0;
  /// Grouped by shell in increasing order, sorted by time within a shell.
  std::vector<PRMAtom> atoms;

  /// Atoms across all shells in time order; ties broken by shell, then by
  /// position within the shell.
  std::vector<PRMAtom> timeline() const;
  /// Number of atoms with time in (t1, t2] and shell n.
  long count(double t1, double t2, ShellIndex n) const;
};

/// Shells 0..shell_cutoff, each with Poisson(T nu(C_n)) atoms, uniform
/// times and marks from the normalized shell restriction. Shell n draws
/// from streams.derive(replica, kPoisson, n).
PRMSample sample_prm(const LevyMeasure& nu, const BanachDisk& disk, double horizon,
                     int shell_cutoff, const StreamFactory& streams, std::uint64_t replica);

/// Validates the stored shells and times against the disk.
void validate_prm(const PRMSample& prm, const BanachDisk& disk);

/// Sum of shell-0 marks with time <= t.
Vector large_jump_process(const PRMSample& prm, double t);

/// Atom sum over (0,t] x C_n minus t times the shell compensator.
Vector compensated_shell_term(const PRMSample& prm, const LevyMeasure& nu, const BanachDisk& disk,
                              int n, double t);

/// J^N_t = sum_{n=1..N} compensated_shell_term(n, t), evaluated from the
/// jump list (time-ordered, marks of shells 1..N) and the per-shell
/// compensators. Both synthesis and analysis go through this function.
class TruncatedCompensatedSum {
 public:
  TruncatedCompensatedSum(std::vector<PRMAtom> jumps, std::vector<Vector> compensators,
                          Eigen::Index dim);
  static TruncatedCompensatedSum from_prm(const PRMSample& prm, const LevyMeasure& nu,
                                          const BanachDisk& disk, int level);

  Vector value(double t) const;
  Vector left_limit(double t) const;
  const std::vector<PRMAtom>& jumps() const { return jumps_; }
  CadlagPath path(const std::vector<double>& grid) const;

 private:
  std::vector<PRMAtom> jumps_;   // time-ordered
  std::vector<Vector> compensators_;  // index n-1 -> shell n
  Vector drift_;  // sum of compensators
  Eigen::Index dim_;
};

struct CompensatedSeriesResult {
  std::vector<int> levels;
  std::vector<double> eval_times;
  /// partial_sums[level][k] = J^level at eval_times[k].
  std::map<int, std::vector<Vector>> partial_sums;
  /// (N, N') -> sup_t ||J^N_t - J^N'_t||_K over eval times and left limits
  /// at jump times, for consecutive levels.
  std::map<std::pair<int, int>, double> sup_gaps;
  /// level -> horizon * sum_{n > level} int_{C_n} ||x||_K^2 dnu.
  std::map<int, double> tail_variance_bound;
};

CompensatedSeriesResult compensated_series(const PRMSample& prm, const LevyMeasure& nu,
                                           const BanachDisk& disk, std::vector<int> levels,
                                           std::vector<double> eval_times);

}  // namespace levy
