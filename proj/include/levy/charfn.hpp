#pragma once

// Levy-Khintchine exponents
//   eta(a) = i<gamma,a> - <Qa,a>/2 + int (e^{i<x,a>} - 1 - i<x,a> 1_K(x)) dnu(x)
// and their comparison against empirical characteristic functionals.

#include "levy/measure.hpp"
#include "levy/space.hpp"
#include "levy/types.hpp"

#include <vector>

namespace levy {

class Characteristics {
 public:
  /// Q must be symmetric to 1e-12 and have eigenvalues >= -1e-10.
  Characteristics(Vector gamma, Matrix covariance, LevyMeasure nu, BanachDisk disk);

  Eigen::Index dim() const { return gamma_.size(); }
  const Vector& gamma() const { return gamma_; }
  const Matrix& covariance() const { return covariance_; }
  const LevyMeasure& nu() const { return nu_; }
  const BanachDisk& disk() const { return disk_; }

 private:
  Vector gamma_;
  Matrix covariance_;
  LevyMeasure nu_;
  BanachDisk disk_;
};

/// Jump part of the exponent restricted to shells first..last (last < 0
/// means all shells). Shell 0 enters uncompensated, shells >= 1
/// compensated. Radial measures go through radial_shell_series, accurate
/// to tolerance.
Complex jump_exponent(const LevyMeasure& nu, const BanachDisk& disk, const Vector& functional,
                      int first_shell = 0, int last_shell = -1, double tolerance = 1e-10);

Complex levy_exponent(const Characteristics& c, const Vector& functional);

/// exp(t * eta(a)), t >= 0.
Complex cf_at_time(const Characteristics& c, const Vector& functional, double t);

struct EmpiricalCF {
  Complex value;
  double stderr_value = 0.0;
};

/// Sample mean of e^{i<x,a>} with sqrt(se_re^2 + se_im^2) as its standard
/// error.
EmpiricalCF empirical_cf(const std::vector<Vector>& samples, const Vector& functional);

struct CFReport {
  Vector functional;
  double t = 0.0;
  Complex analytic;
  Complex empirical;
  double stderr_value = 0.0;
  double z_score = 0.0;
};

std::vector<CFReport> cf_compare(const Characteristics& c, const std::vector<Vector>& samples,
                                 const std::vector<Vector>& functionals, double t);

}  // namespace levy
