#include "levy/gaussian.hpp"
#include "levy/stats.hpp"
#include "test_util.hpp"

using namespace levy;
using levy::test::vec;

namespace {

std::vector<CadlagPath> sample_paths(const WienerSampler& sampler, int count, std::uint64_t seed) {
  const StreamFactory streams(seed);
  std::vector<CadlagPath> paths;
  for (int r = 0; r < count; ++r) {
    auto rng = streams.derive(r, StreamComponent::kWiener);
    paths.push_back(sample_wiener_path(sampler, rng));
  }
  return paths;
}

double value(const CadlagPath& p, double t, const Vector& a) { return p.value_at(t).dot(a); }

}  // namespace

TEST_CASE("WienerSampler factor") {
  Matrix q(3, 3);
  q << 1.0, 0.5, 0.2, 0.5, 0.89, -0.22, 0.2, -0.22, 0.2;
  const WienerSampler s(q, uniform_grid(1.0, 4));
  CHECK((s.factor() * s.factor().transpose() - q).cwiseAbs().maxCoeff() <= 1e-10);
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(WienerSampler(neg, uniform_grid(1.0, 4)), InvalidArgument);
  CHECK_THROWS_AS(WienerSampler(Matrix::Identity(2, 2), {0.0, 0.5, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(WienerSampler(Matrix::Identity(2, 2), {0.1, 0.5}), InvalidArgument);
}

TEST_CASE("zero covariance gives the zero path") {
  const WienerSampler s(Matrix::Zero(2, 2), uniform_grid(1.0, 8));
  Rng rng(1);
  const auto p = sample_wiener_path(s, rng);
  for (const auto& k : p.knots()) CHECK(k.value.isZero(0.0));
  CHECK(p.jumps().empty());
  const auto paths = sample_paths(s, 3, 1);
  const auto c = wiener_cov_check(paths, Matrix::Zero(2, 2), vec({1, 0}), vec({0, 1}), 0.5, 1.0);
  CHECK(c.estimate == 0.0);
  CHECK(c.target == 0.0);
  CHECK(c.z_score == 0.0);
}

TEST_CASE("scalar Brownian motion variance") {
  const WienerSampler s(Matrix::Identity(1, 1), uniform_grid(1.0, 4));
  const auto paths = sample_paths(s, 10000, 99);
  for (double t : {0.25, 0.5, 1.0}) {
    std::vector<double> sq;
    for (const auto& p : paths) sq.push_back(std::pow(p.value_at(t)[0], 2));
    // Var(W_t^2) = 2 t^2 for a centered normal.
    const double z = (stats::mean(sq) - t) / (std::sqrt(2.0) * t / 100.0);
    CHECK(std::abs(z) <= 3.0);
  }
  CHECK(paths.front().value_at(0.0)[0] == 0.0);
}

TEST_CASE("disjoint increments are uncorrelated") {
  Matrix q(2, 2);
  q << 1.0, 0.6, 0.6, 2.0;
  const WienerSampler s(q, uniform_grid(1.0, 4));
  const auto paths = sample_paths(s, 10000, 5);
  const Vector a = vec({0.7, -0.4});
  std::vector<double> first, second;
  for (const auto& p : paths) {
    first.push_back(value(p, 0.5, a) - value(p, 0.25, a));
    second.push_back(value(p, 1.0, a) - value(p, 0.75, a));
  }
  const auto c = stats::correlation(first, second);
  CHECK(std::abs(c.r) * std::sqrt(10000.0) <= 3.0);
}

TEST_CASE("wiener_cov_check") {
  Matrix q(2, 2);
  q << 1.0, 0.6, 0.6, 2.0;
  const WienerSampler s(q, uniform_grid(1.0, 4));
  const auto paths = sample_paths(s, 10000, 31);
  const Vector a = vec({1.0, 0.5});
  const Vector b = vec({-0.3, 1.2});

  const auto same = wiener_cov_check(paths, q, a, a, 0.75, 0.75);
  CHECK(same.target == doctest::Approx(0.75 * a.dot(q * a)).epsilon(1e-15));
  CHECK(same.z_score <= 4.0);

  const auto ab = wiener_cov_check(paths, q, a, b, 0.25, 1.0);
  const auto ba = wiener_cov_check(paths, q, b, a, 0.25, 1.0);
  CHECK(ab.target == ba.target);
  CHECK(ab.target == doctest::Approx(0.25 * a.dot(q * b)));
  CHECK(ab.z_score <= 4.0);
  CHECK(ba.z_score <= 4.0);
  CHECK(ab.stderr_value > 0.0);

  CHECK_THROWS_AS(wiener_cov_check(paths, q, a, b, 0.3, 1.0), InvalidArgument);
  CHECK_THROWS_AS(wiener_cov_check({paths[0]}, q, a, b, 0.25, 1.0), InvalidArgument);
}

TEST_CASE("functionals act linearly on each path") {
  const WienerSampler s(Matrix::Identity(3, 3), uniform_grid(2.0, 6));
  const auto paths = sample_paths(s, 5, 2);
  const Vector a = vec({0.3, -1.0, 2.0});
  for (const auto& p : paths)
    for (const auto& k : p.knots()) CHECK(k.value.dot(Vector(4.0 * a)) == 4.0 * k.value.dot(a));
}

TEST_CASE("increments shrink under grid refinement") {
  // Max increment over a grid of step h scales like sqrt(h log(1/h)).
  const BanachDisk disk = BanachDisk::unit(2);
  const auto max_increment = [&](int steps) {
    const WienerSampler s(Matrix::Identity(2, 2), uniform_grid(1.0, steps));
    const auto paths = sample_paths(s, 50, 8);
    double total = 0.0;
    for (const auto& p : paths) {
      double worst = 0.0;
      const auto& k = p.knots();
      for (std::size_t i = 1; i < k.size(); ++i)
        worst = std::max(worst, gauge_norm(Vector(k[i].value - k[i - 1].value), disk));
      total += worst;
    }
    return total / 50.0;
  };
  const double coarse = max_increment(64);
  const double fine = max_increment(1024);
  const auto scale = [](double h) { return std::sqrt(h * std::log(1.0 / h)); };
  const double predicted = scale(1.0 / 1024) / scale(1.0 / 64);
  const double ratio = fine / coarse;
  CHECK(ratio < 1.0);
  CHECK(ratio <= 3.0 * predicted);
  CHECK(ratio >= predicted / 3.0);
}
