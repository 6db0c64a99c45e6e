#include "levy/paths.hpp"

#include <algorithm>
#include <cmath>

namespace levy {

CadlagPath::CadlagPath(std::vector<Knot> knots) : knots_(std::move(knots)) {
  require(!knots_.empty(), "CadlagPath: no knots");
  require(knots_.front().time == 0.0, "CadlagPath: first knot must be at time 0");
  require(!knots_.front().has_jump, "CadlagPath: no jump allowed at time 0");
  const auto dim = knots_.front().value.size();
  require(dim >= 1, "CadlagPath: empty values");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    auto& k = knots_[i];
    require(k.value.size() == dim, "CadlagPath: value dimension mismatch");
    require(std::isfinite(k.time), "CadlagPath: non-finite time");
    if (i > 0) require(k.time > knots_[i - 1].time, "CadlagPath: knot times must increase");
    if (k.delta.size() == 0) k.delta = Vector::Zero(dim);
    require(k.delta.size() == dim, "CadlagPath: delta dimension mismatch");
    if (k.has_jump)
      require(!k.delta.isZero(0.0), "CadlagPath: jump deltas must be nonzero");
    else
      require(k.delta.isZero(0.0), "CadlagPath: delta without a jump");
  }
}

CadlagPath CadlagPath::continuous(const std::vector<double>& grid,
                                  const std::vector<Vector>& values) {
  require(grid.size() == values.size(), "CadlagPath::continuous: grid/value size mismatch");
  std::vector<Knot> knots;
  knots.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    knots.push_back({grid[i], values[i], Vector::Zero(values[i].size()), true, false});
  return CadlagPath(std::move(knots));
}

CadlagPath CadlagPath::assemble(const std::vector<double>& grid, const std::vector<Jump>& jumps,
                                const std::function<Vector(double)>& value) {
  require(!grid.empty() && grid.front() == 0.0, "CadlagPath::assemble: grid must start at 0");
  std::vector<Jump> sorted = jumps;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Jump& a, const Jump& b) { return a.time < b.time; });
  std::vector<Knot> knots;
  knots.reserve(grid.size() + sorted.size());
  std::size_t g = 0;
  std::size_t j = 0;
  while (g < grid.size() || j < sorted.size()) {
    const double tg = g < grid.size() ? grid[g] : kInfinity;
    const double tj = j < sorted.size() ? sorted[j].time : kInfinity;
    const double t = std::min(tg, tj);
    require(t > 0.0 || tj > 0.0, "CadlagPath::assemble: jump at time 0");
    Knot k;
    k.time = t;
    k.value = value(t);
    k.delta = Vector::Zero(k.value.size());
    k.on_grid = tg == t;
    if (k.on_grid) ++g;
    while (j < sorted.size() && sorted[j].time == t) {
      k.delta += sorted[j].delta;
      k.has_jump = true;
      ++j;
    }
    if (k.has_jump && k.delta.isZero(0.0)) {
      // Coincident jumps cancelled.
      k.has_jump = false;
    }
    knots.push_back(std::move(k));
  }
  return CadlagPath(std::move(knots));
}

CadlagPath CadlagPath::zero(const std::vector<double>& grid, Eigen::Index dim) {
  return continuous(grid, std::vector<Vector>(grid.size(), Vector::Zero(dim)));
}

std::vector<double> CadlagPath::evaluation_times() const {
  std::vector<double> out;
  out.reserve(knots_.size());
  for (const auto& k : knots_) out.push_back(k.time);
  return out;
}

std::vector<double> CadlagPath::grid() const {
  std::vector<double> out;
  for (const auto& k : knots_)
    if (k.on_grid) out.push_back(k.time);
  return out;
}

std::vector<Jump> CadlagPath::jumps() const {
  std::vector<Jump> out;
  for (const auto& k : knots_)
    if (k.has_jump) out.push_back({k.time, k.delta});
  return out;
}

std::size_t CadlagPath::last_knot_at_or_before(double t) const {
  if (!(t >= 0.0 && t <= horizon()))
    throw InvalidArgument("CadlagPath: time " + std::to_string(t) + " outside [0, " +
                          std::to_string(horizon()) + "]");
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double v, const Knot& k) { return v < k.time; });
  return static_cast<std::size_t>(std::distance(knots_.begin(), it)) - 1;
}

Vector CadlagPath::value_at(double t) const {
  const auto i = last_knot_at_or_before(t);
  const auto& k = knots_[i];
  if (k.time == t) return k.value;
  const auto& next = knots_[i + 1];
  const double s = (t - k.time) / (next.time - k.time);
  const Vector left = next.value - next.delta;
  return k.value + s * (left - k.value);
}

Vector CadlagPath::left_limit(double t) const {
  if (!(t > 0.0)) throw InvalidArgument("CadlagPath::left_limit: requires t > 0");
  const auto i = last_knot_at_or_before(t);
  const auto& k = knots_[i];
  if (k.time == t) return k.value - k.delta;
  return value_at(t);
}

std::vector<double> uniform_grid(double horizon, int steps) {
  require(horizon > 0.0 && std::isfinite(horizon), "uniform_grid: horizon must be positive");
  require(steps >= 1, "uniform_grid: need at least one step");
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) grid[i] = horizon * i / steps;
  grid.back() = horizon;
  return grid;
}

long count_measure(const CadlagPath& path, double t1, double t2, const std::set<int>& shells,
                   const BanachDisk& disk) {
  require(t1 <= t2, "count_measure: window must satisfy t1 <= t2");
  require(t1 >= 0.0 && t2 <= path.horizon(), "count_measure: window outside horizon");
  long count = 0;
  for (const auto& k : path.knots()) {
    if (!k.has_jump || k.time <= t1 || k.time > t2) continue;
    if (shells.contains(shell_index(k.delta, disk).n)) ++count;
  }
  return count;
}

double compensated_count(const CadlagPath& path, double t1, double t2, const std::set<int>& shells,
                         const LevyMeasure& nu, const BanachDisk& disk) {
  double intensity = 0.0;
  for (int n : shells) intensity += shell_mass(nu, disk, ShellIndex{n});
  if (!std::isfinite(intensity))
    throw InvalidArgument("compensated_count: infinite intensity over the requested shells");
  return static_cast<double>(count_measure(path, t1, t2, shells, disk)) - (t2 - t1) * intensity;
}

int jump_class(double size) {
  require(size > 0.0, "jump_class: jump size must be positive");
  if (size > 0.5) return 1;
  return shell_of_gauge(size).n;
}

void JumpNumbering::add(int cls, double time) {
  auto& times = classes_[cls];
  require(times.empty() || time > times.back(), "JumpNumbering: times must increase per class");
  times.push_back(time);
}

double JumpNumbering::time(int n, std::size_t k) const {
  require(n >= 1 && k >= 1, "JumpNumbering::time: indices are 1-based");
  const auto it = classes_.find(n);
  if (it == classes_.end() || k > it->second.size()) return kInfinity;
  return it->second[k - 1];
}

std::size_t JumpNumbering::class_size(int n) const {
  const auto it = classes_.find(n);
  return it == classes_.end() ? 0 : it->second.size();
}

JumpNumbering jump_numbering(const CadlagPath& path, const SpaceModel& model) {
  require(path.dim() == model.dim(), "jump_numbering: dimension mismatch");
  JumpNumbering numbering;
  for (const auto& k : path.knots()) {
    if (!k.has_jump) continue;
    const double size = weak_distance(k.value, path.left_limit(k.time), model);
    numbering.add(jump_class(size), k.time);
  }
  return numbering;
}

PathDistance PathDistance::gauge(const BanachDisk& disk) {
  return {[disk](const Vector& x, const Vector& y) { return gauge_norm(x - y, disk); },
          [disk](const Vector& d) { return gauge_norm(d, disk); }};
}

PathDistance PathDistance::weak(const SpaceModel& model) {
  return {[model](const Vector& x, const Vector& y) { return weak_distance(x, y, model); },
          [model](const Vector& d) { return (d.array().abs() * model.weights().array()).sum(); }};
}

namespace {

struct EvalPoint {
  double time;
  Vector value;
  bool left_limit;  // approached from the left at `time`
  bool after_jump = false;  // right value at a jump knot
};

// Knot values, left limits at jump knots, and enough interior points on
// every linear piece that consecutive points are closer than eps / 2.
std::vector<EvalPoint> evaluation_points(const CadlagPath& path, double eps,
                                         const PathDistance& metric) {
  const auto& knots = path.knots();
  std::vector<EvalPoint> points;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto& k = knots[i];
    if (k.has_jump) points.push_back({k.time, k.value - k.delta, true});
    points.push_back({k.time, k.value, false, k.has_jump});
    if (i + 1 == knots.size()) break;
    const auto& next = knots[i + 1];
    const Vector increment = (next.value - next.delta) - k.value;
    const double bound = metric.segment_bound(increment);
    const auto pieces = static_cast<long>(std::floor(2.0 * bound / eps)) + 1;
    require(pieces < 10000000, "oscillation_partition: eps too small for this path");
    for (long s = 1; s < pieces; ++s) {
      const double frac = static_cast<double>(s) / static_cast<double>(pieces);
      const double t = k.time + frac * (next.time - k.time);
      if (t <= k.time || t >= next.time) continue;
      points.push_back({t, k.value + frac * increment, false});
    }
  }
  return points;
}

}  // namespace

std::vector<double> oscillation_partition(const CadlagPath& path, double eps,
                                          const PathDistance& metric) {
  require(eps > 0.0, "oscillation_partition: eps must be positive");
  const auto points = evaluation_points(path, eps, metric);
  std::vector<double> breaks{0.0};
  std::vector<const EvalPoint*> current;
  const EvalPoint* previous = nullptr;
  for (const auto& p : points) {
    double widest = 0.0;
    for (const auto* q : current) widest = std::max(widest, metric.distance(p.value, q->value));
    if (widest < eps) {
      current.push_back(&p);
    } else if (p.after_jump) {
      breaks.push_back(p.time);
      current = {&p};
    } else {
      // Along a continuous piece the value at p.time is also the left limit
      // of the interval ending there, so the break moves back to the
      // preceding evaluation point.
      breaks.push_back(previous->time);
      current = {previous, &p};
    }
    previous = &p;
  }
  if (breaks.back() < path.horizon())
    breaks.push_back(path.horizon());
  return breaks;
}

double interval_oscillation(const CadlagPath& path, double a, double b, double eps,
                            const PathDistance& metric) {
  require(a < b, "interval_oscillation: need a < b");
  const auto points = evaluation_points(path, eps, metric);
  std::vector<const Vector*> inside;
  for (const auto& p : points) {
    const bool in = p.left_limit ? (p.time > a && p.time <= b) : (p.time >= a && p.time < b);
    if (in) inside.push_back(&p.value);
  }
  // Approach to b from the left along a linear piece.
  const Vector approach = path.left_limit(b);
  inside.push_back(&approach);
  double widest = 0.0;
  for (std::size_t i = 0; i < inside.size(); ++i)
    for (std::size_t j = i + 1; j < inside.size(); ++j)
      widest = std::max(widest, metric.distance(*inside[i], *inside[j]));
  return widest;
}

CadlagPath detect_jumps(const std::vector<double>& grid, const std::vector<Vector>& values,
                        double threshold, const BanachDisk& disk) {
  require(grid.size() == values.size() && !grid.empty(), "detect_jumps: grid/value mismatch");
  require(threshold > 0.0, "detect_jumps: threshold must be positive");
  std::vector<Knot> knots;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Knot k{grid[i], values[i], Vector::Zero(values[i].size()), true, false};
    if (i > 0) {
      const Vector inc = values[i] - values[i - 1];
      if (gauge_norm(inc, disk) > threshold) {
        k.delta = inc;
        k.has_jump = true;
      }
    }
    knots.push_back(std::move(k));
  }
  return CadlagPath(std::move(knots));
}

}  // namespace levy
