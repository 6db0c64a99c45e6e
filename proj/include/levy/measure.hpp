#pragma once

// Levy measures with exact shell masses and compensators.
//
// Two representations are supported:
//  * atomic: finitely many weighted atoms (finite activity, exact sums);
//  * radial shell: mass m(n) = scale * n^exponent on every shell C_n,
//    gauge radius uniform inside the shell, direction drawn from a finite
//    set of gauge-one directions, plus a finite tail mass outside K with
//    gauge radius uniform in (1, outer_radius]. Infinite activity is
//    allowed; exponent < 1 keeps sum_n m(n)/n^2 finite.

#include "levy/rng.hpp"
#include "levy/space.hpp"
#include "levy/types.hpp"

#include <array>
#include <functional>
#include <variant>
#include <vector>

namespace levy {

struct Atom {
  Vector point;
  double mass = 0.0;
};

struct RadialShellParams {
  Eigen::Index dim = 1;
  double scale = 1.0;
  double exponent = -1.0;
  double outer_mass = 0.0;
  double outer_radius = 2.0;
  /// Raw directions; rescaled to gauge one against the disk in use. Empty
  /// means the 2d axis directions +-k_i e_i.
  std::vector<Vector> directions;
  /// Direction probabilities; empty means uniform.
  std::vector<double> direction_weights;
};

class LevyMeasure {
 public:
  enum class Kind { kAtomic, kRadialShell };

  static LevyMeasure zero(Eigen::Index dim);
  static LevyMeasure atomic(Eigen::Index dim, std::vector<Atom> atoms);
  static LevyMeasure radial_shell(RadialShellParams params);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  bool is_atomic() const { return kind_ == Kind::kAtomic; }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const RadialShellParams& radial() const { return radial_; }

  /// m(n) for the radial representation.
  double radial_shell_mass(int n) const;

  /// True when nu(E) < infinity.
  bool has_finite_mass() const;
  double total_mass() const;

  /// Deepest occupied shell for atomic measures (0 when all mass is outside
  /// K or the measure is zero); unbounded for radial shells.
  int deepest_shell(const BanachDisk& disk) const;

  /// Restriction to shells in [first, last] (atomic only).
  LevyMeasure restricted_to_shells(const BanachDisk& disk, int first, int last) const;

 private:
  LevyMeasure() = default;

  Kind kind_ = Kind::kAtomic;
  Eigen::Index dim_ = 0;
  std::vector<Atom> atoms_;
  RadialShellParams radial_;
};

/// Gauge-one directions and their probabilities for a radial measure.
struct DirectionSet {
  std::vector<Vector> directions;
  std::vector<double> probabilities;
};
DirectionSet radial_directions(const LevyMeasure& nu, const BanachDisk& disk);

/// nu(C_n), or nu(K^c) for n = 0.
double shell_mass(const LevyMeasure& nu, const BanachDisk& disk, ShellIndex n);

/// The Bochner integral of x over C_n, n >= 1.
Vector shell_compensator(const LevyMeasure& nu, const BanachDisk& disk, ShellIndex n);

/// Integral of ||x||_K^2 over C_n, n >= 1.
double shell_second_moment(const LevyMeasure& nu, const BanachDisk& disk, ShellIndex n);

/// Sum over shells n > level of shell_second_moment.
double second_moment_tail(const LevyMeasure& nu, const BanachDisk& disk, int level);

/// Radial measures: sum over shells n > level of m(n) E_n[r^order], with r
/// the gauge radius, uniform on the shell's gauge interval. Needs
/// exponent < order - 1.
double radial_moment_tail(const LevyMeasure& nu, int order, int level);

/// Radial measures: sum over shells first..last (last < 0: all n >= first,
/// first >= 1) of int_{C_n} phi(<x,a>) dnu with
///   phi(t) = e^{it} - 1        (order 1),
///   phi(t) = e^{it} - 1 - it   (order 2).
/// Shells are integrated by quadrature until the fifth-order Taylor
/// remainder bound of the rest falls below tolerance; the rest is then
/// summed through its order-2..4 Taylor terms and radial_moment_tail.
Complex radial_shell_series(const LevyMeasure& nu, const BanachDisk& disk,
                            const Vector& functional, int first, int last, int order,
                            double tolerance);

/// Draw from nu restricted to shell n, normalized. Every draw lands in shell n.
Vector sample_shell(const LevyMeasure& nu, const BanachDisk& disk, ShellIndex n, Rng& rng);

/// Integral of f over shell n against nu. Atomic measures sum exactly;
/// radial measures use the direction set times a 16-point Gauss-Legendre
/// rule in the gauge radius.
Complex integrate_shell(const LevyMeasure& nu, const BanachDisk& disk, ShellIndex n,
                        const std::function<Complex(const Vector&)>& f);

/// Fixed 16-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre16 {
  std::array<double, 16> nodes;
  std::array<double, 16> weights;
};
const GaussLegendre16& gauss_legendre16();

/// Finite discrete law.
struct FiniteDistribution {
  std::vector<Vector> points;
  std::vector<double> probabilities;

  double total_probability() const;
  Complex characteristic_function(const Vector& functional) const;
  /// Probability of {x : ||x + shift||_K <= radius}, with relative slack
  /// 1e-12 on the radius so exact boundary points are not lost to rounding.
  double mass_in_scaled_disk(const BanachDisk& disk, double radius, const Vector& shift) const;
};

/// exp(int (e^{i<x,a>} - 1) d nu) for a finite atomic measure.
Complex poisson_exponential_cf(const LevyMeasure& nu, const Vector& functional);
/// Same for any finite measure; radial measures are integrated shell by
/// shell until the neglected mass bound drops below 1e-12.
Complex poisson_exponential_cf(const LevyMeasure& nu, const BanachDisk& disk,
                               const Vector& functional);

/// The compound Poisson law e^{-nu(E)} sum_k nu^{*k}/k! of a finite atomic
/// measure, summed up to series_cutoff convolution powers. Throws
/// BudgetExceeded when the neglected Poisson tail exceeds tolerance.
FiniteDistribution poisson_exponential_finite(const LevyMeasure& nu, int series_cutoff,
                                              double tolerance = 1e-10);

/// P(N > cutoff) for N ~ Poisson(mean).
double poisson_tail(double mean, int cutoff);

}  // namespace levy
