#include "levy/charfn.hpp"

#include "levy/stats.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace levy {

Characteristics::Characteristics(Vector gamma, Matrix covariance, LevyMeasure nu, BanachDisk disk)
    : gamma_(std::move(gamma)),
      covariance_(std::move(covariance)),
      nu_(std::move(nu)),
      disk_(std::move(disk)) {
  const auto d = gamma_.size();
  require(d >= 1, "Characteristics: empty drift");
  require(covariance_.rows() == d && covariance_.cols() == d,
          "Characteristics: covariance must be d x d");
  require(nu_.dim() == d && disk_.dim() == d, "Characteristics: dimension mismatch");
  require(gamma_.allFinite() && covariance_.allFinite(), "Characteristics: non-finite entries");
  require((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
          "Characteristics: covariance must be symmetric");
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance_, Eigen::EigenvaluesOnly);
  require(eig.eigenvalues().minCoeff() >= -1e-10,
          "Characteristics: covariance must be positive semidefinite");
}

Complex jump_exponent(const LevyMeasure& nu, const BanachDisk& disk, const Vector& functional,
                      int first_shell, int last_shell, double tolerance) {
  require(functional.size() == nu.dim() && nu.dim() == disk.dim(),
          "jump_exponent: dimension mismatch");
  const auto uncompensated = [&](const Vector& x) {
    return std::exp(Complex(0.0, x.dot(functional))) - 1.0;
  };
  const auto compensated = [&](const Vector& x) {
    const double theta = x.dot(functional);
    return std::exp(Complex(0.0, theta)) - 1.0 - Complex(0.0, theta);
  };
  const auto in_range = [&](int n) {
    return n >= first_shell && (last_shell < 0 || n <= last_shell);
  };

  Complex total{0.0, 0.0};
  if (nu.is_atomic()) {
    for (const auto& a : nu.atoms()) {
      const int n = shell_index(a.point, disk).n;
      if (!in_range(n)) continue;
      total += a.mass * (n == 0 ? uncompensated(a.point) : compensated(a.point));
    }
    return total;
  }

  if (in_range(0)) total += integrate_shell(nu, disk, ShellIndex{0}, uncompensated);
  if (last_shell >= 0 && last_shell < 1) return total;
  return total + radial_shell_series(nu, disk, functional, std::max(first_shell, 1), last_shell, 2,
                                     tolerance);
}

Complex levy_exponent(const Characteristics& c, const Vector& functional) {
  require(functional.size() == c.dim(), "levy_exponent: dimension mismatch");
  const Complex drift(0.0, c.gamma().dot(functional));
  const double gauss = -0.5 * functional.dot(c.covariance() * functional);
  return drift + gauss + jump_exponent(c.nu(), c.disk(), functional);
}

Complex cf_at_time(const Characteristics& c, const Vector& functional, double t) {
  require(t >= 0.0 && std::isfinite(t), "cf_at_time: time must be nonnegative");
  return std::exp(t * levy_exponent(c, functional));
}

EmpiricalCF empirical_cf(const std::vector<Vector>& samples, const Vector& functional) {
  require(samples.size() >= 2, "empirical_cf: need at least two samples");
  std::vector<double> re(samples.size()), im(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    require_same_dim(samples[j], functional, "empirical_cf");
    const double theta = samples[j].dot(functional);
    re[j] = std::cos(theta);
    im[j] = std::sin(theta);
  }
  EmpiricalCF out;
  out.value = {stats::mean(re), stats::mean(im)};
  const double se_re = stats::standard_error(re);
  const double se_im = stats::standard_error(im);
  out.stderr_value = std::sqrt(se_re * se_re + se_im * se_im);
  return out;
}

std::vector<CFReport> cf_compare(const Characteristics& c, const std::vector<Vector>& samples,
                                 const std::vector<Vector>& functionals, double t) {
  require(!functionals.empty(), "cf_compare: no functionals");
  std::vector<CFReport> reports;
  reports.reserve(functionals.size());
  for (const auto& a : functionals) {
    const auto emp = empirical_cf(samples, a);
    CFReport r;
    r.functional = a;
    r.t = t;
    r.analytic = cf_at_time(c, a, t);
    r.empirical = emp.value;
    r.stderr_value = emp.stderr_value;
    r.z_score = stats::z_score(std::abs(emp.value - r.analytic), emp.stderr_value);
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace levy
