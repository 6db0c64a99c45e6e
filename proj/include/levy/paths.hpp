#pragma once

// Cadlag paths on a bounded horizon [0, T].
//
// A path is stored on its evaluation structure: the sorted union of a time
// grid and the jump times ("knots"). Each knot carries the right-continuous
// value and the jump delta there (zero if no jump). Between consecutive
// knots the path is linear, running from the value at the earlier knot to
// the left limit at the later one.

#include "levy/measure.hpp"
#include "levy/space.hpp"
#include "levy/types.hpp"

#include <functional>
#include <map>
#include <set>
#include <vector>

namespace levy {

struct Jump {
  double time;
  Vector delta;
};

struct Knot {
  double time = 0.0;
  Vector value;
  Vector delta;  // zero when the knot carries no jump
  bool on_grid = true;
  bool has_jump = false;
};

class CadlagPath {
 public:
  /// Knots must be strictly increasing in time, start at 0 with no jump,
  /// and carry nonzero deltas exactly where has_jump is set.
  explicit CadlagPath(std::vector<Knot> knots);

  /// Continuous path with the given grid values.
  static CadlagPath continuous(const std::vector<double>& grid, const std::vector<Vector>& values);

  /// Path whose knots are grid ∪ jump times; value(t) supplies the
  /// right-continuous value at every knot.
  static CadlagPath assemble(const std::vector<double>& grid, const std::vector<Jump>& jumps,
                             const std::function<Vector(double)>& value);

  /// The zero path of dimension dim on the grid.
  static CadlagPath zero(const std::vector<double>& grid, Eigen::Index dim);

  Eigen::Index dim() const { return knots_.front().value.size(); }
  double horizon() const { return knots_.back().time; }
  const std::vector<Knot>& knots() const { return knots_; }
  std::vector<double> evaluation_times() const;
  std::vector<double> grid() const;
  std::vector<Jump> jumps() const;

  Vector value_at(double t) const;
  Vector left_limit(double t) const;

 private:
  std::size_t last_knot_at_or_before(double t) const;

  std::vector<Knot> knots_;
};

/// Uniform grid 0 = t_0 < ... < t_steps = horizon.
std::vector<double> uniform_grid(double horizon, int steps);

/// Number of jumps with time in (t1, t2] whose delta lies in one of the shells.
long count_measure(const CadlagPath& path, double t1, double t2, const std::set<int>& shells,
                   const BanachDisk& disk);

/// count_measure minus (t2 - t1) times the total mass of the shells.
double compensated_count(const CadlagPath& path, double t1, double t2, const std::set<int>& shells,
                         const LevyMeasure& nu, const BanachDisk& disk);

/// Class of a jump of weak-metric size s: 1 for s > 1/2, otherwise the n
/// with 1/(n+1) < s <= 1/n.
int jump_class(double size);

class JumpNumbering {
 public:
  void add(int cls, double time);
  /// k-th jump time (1-based) of class n, or infinity when class n has
  /// fewer than k jumps.
  double time(int n, std::size_t k) const;
  std::size_t class_size(int n) const;
  const std::map<int, std::vector<double>>& classes() const { return classes_; }

 private:
  std::map<int, std::vector<double>> classes_;
};

JumpNumbering jump_numbering(const CadlagPath& path, const SpaceModel& model);

/// Distance used for oscillation; segment_bound(d) bounds the distance
/// between the endpoints of any sub-segment of length fraction s of a
/// linear piece with increment d by s * segment_bound(d).
struct PathDistance {
  std::function<double(const Vector&, const Vector&)> distance;
  std::function<double(const Vector&)> segment_bound;

  static PathDistance gauge(const BanachDisk& disk);
  static PathDistance weak(const SpaceModel& model);
};

/// Breakpoints 0 = t_0 < ... < t_k = horizon with oscillation < eps on
/// every [t_{i-1}, t_i).
std::vector<double> oscillation_partition(const CadlagPath& path, double eps,
                                          const PathDistance& metric);

/// Oscillation over [a, b), measured on the same evaluation points that
/// oscillation_partition uses for this eps.
double interval_oscillation(const CadlagPath& path, double a, double b, double eps,
                            const PathDistance& metric);

/// Heuristic jump detection for grid-only data: increments whose gauge
/// exceeds threshold are recorded as jumps at the later grid point.
CadlagPath detect_jumps(const std::vector<double>& grid, const std::vector<Vector>& values,
                        double threshold, const BanachDisk& disk);

}  // namespace levy
