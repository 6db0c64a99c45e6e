#include "levy/space.hpp"
#include "test_util.hpp"

#include <random>

using namespace levy;
using levy::test::vec;

TEST_CASE("gauge_norm examples") {
  const BanachDisk disk(vec({1.0, 0.5, 1.0 / 3.0}));
  CHECK(gauge_norm(vec({1, 0, 0}), disk) == 1.0);
  CHECK(gauge_norm(vec({0, 0, 0}), disk) == 0.0);
  CHECK(gauge_norm(vec({0, 1, 0}), disk) == 2.0);
  CHECK(gauge_norm(vec({0, 0, -1}), disk) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("gauge_norm rejects dimension mismatch") {
  const BanachDisk disk(vec({1.0, 2.0}));
  CHECK_THROWS_AS(gauge_norm(vec({1, 0, 0}), disk), InvalidArgument);
}

TEST_CASE("gauge_norm is a norm") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  const BanachDisk disk(vec({0.7, 2.0, 1.3, 0.25}));
  for (int trial = 0; trial < 500; ++trial) {
    Vector x(4), y(4);
    for (int i = 0; i < 4; ++i) {
      x[i] = g(rng);
      y[i] = g(rng);
    }
    const double alpha = 3.0 * g(rng);
    CHECK(gauge_norm(Vector(x + y), disk) <= gauge_norm(x, disk) + gauge_norm(y, disk) + 1e-15);
    CHECK(gauge_norm(Vector(alpha * x), disk) ==
          doctest::Approx(std::abs(alpha) * gauge_norm(x, disk)).epsilon(1e-14));
    CHECK(gauge_norm(Vector(-x), disk) == gauge_norm(x, disk));
  }
}

TEST_CASE("gauge_norm works on other scalar types") {
  const BanachDisk disk(vec({1.0, 0.5}));
  Eigen::Vector2f x(0.25f, 0.25f);
  CHECK(gauge_norm(x, disk) == doctest::Approx(0.5f));
}

TEST_CASE("weak_distance examples") {
  const SpaceModel one(vec({1.0}));
  CHECK(weak_distance(vec({3}), vec({0}), one) == 1.0);
  CHECK(weak_distance(vec({0.25}), vec({0}), one) == 0.25);
  const SpaceModel model(3);
  const Vector x = vec({0.3, -2.0, 5.0});
  CHECK(weak_distance(x, x, model) == 0.0);
  CHECK_THROWS_AS(weak_distance(vec({1, 2}), vec({1, 2, 3}), model), InvalidArgument);
  CHECK_THROWS_AS(weak_distance(vec({1, 2}), vec({1, 2}), model), InvalidArgument);
}

TEST_CASE("weak_distance is a bounded metric") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 2.0);
  const SpaceModel model(3);
  const double bound = model.weights().sum();
  CHECK(bound <= 1.0 + 1e-15);
  for (int trial = 0; trial < 500; ++trial) {
    Vector x(3), y(3), z(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = g(rng);
      y[i] = g(rng);
      z[i] = g(rng);
    }
    const double dxy = weak_distance(x, y, model);
    CHECK(dxy == weak_distance(y, x, model));
    CHECK(dxy <= bound + 1e-15);
    CHECK(dxy <= weak_distance(x, z, model) + weak_distance(z, y, model) + 1e-15);
  }
}

TEST_CASE("weak_distance follows gauge convergence") {
  const BanachDisk disk(vec({1.0, 0.5, 2.0}));
  const SpaceModel model(3);
  const Vector x = vec({1.0, -1.0, 0.5});
  const Vector dir = vec({1.0, 1.0, -1.0});
  double previous = kInfinity;
  for (int k = 1; k <= 40; ++k) {
    const Vector xk = x + std::pow(0.5, k) * dir;
    const double g = gauge_norm(Vector(xk - x), disk);
    const double d = weak_distance(xk, x, model);
    CHECK(d < previous);
    CHECK(d <= g * disk.radii().maxCoeff() + 1e-15);
    previous = d;
  }
  CHECK(previous < 1e-11);
}

TEST_CASE("SpaceModel weights") {
  const SpaceModel model(3);
  CHECK(model.weights()[0] == doctest::Approx(4.0 / 7.0));
  CHECK(model.weights()[2] == doctest::Approx(1.0 / 7.0));
  const SpaceModel scaled(vec({2.0, 2.0}));
  CHECK(scaled.weights().sum() == doctest::Approx(1.0));
  const SpaceModel kept(vec({0.1, 0.2}));
  CHECK(kept.weights()[1] == 0.2);
  CHECK_THROWS_AS(SpaceModel(vec({1.0, 0.0})), InvalidArgument);
  CHECK_THROWS_AS(SpaceModel(Eigen::Index{0}), InvalidArgument);
  CHECK_THROWS_AS(BanachDisk(vec({1.0, -1.0})), InvalidArgument);
}

TEST_CASE("shell_index examples") {
  const BanachDisk disk = BanachDisk::unit(2);
  CHECK(shell_index(vec({0.6, 0.0}), disk).n == 1);
  CHECK(shell_index(vec({0.0, -2.0}), disk).n == 0);
  CHECK(shell_index(vec({0.3, 0.1}), disk).n == 3);
  CHECK_THROWS_AS(shell_index(vec({0.0, 0.0}), disk), InvalidArgument);
}

TEST_CASE("shell boundaries are left-open right-closed") {
  for (int n = 1; n <= 1000; ++n) {
    const double upper = 1.0 / n;
    CHECK(shell_of_gauge(upper).n == n);
    CHECK(shell_of_gauge(std::nextafter(upper, 2.0)).n == n - 1);
    const auto [lo, hi] = shell_gauge_interval(n);
    CHECK(hi == upper);
    CHECK(shell_of_gauge(std::nextafter(lo, 2.0)).n == n);
  }
  CHECK(shell_of_gauge(1.0).n == 1);
  CHECK(shell_of_gauge(1.0000001).n == 0);
}

TEST_CASE("shell partition is exact") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const BanachDisk disk(vec({1.0, 0.5}));
  for (int trial = 0; trial < 2000; ++trial) {
    const double scale = std::pow(10.0, 3.0 * u(rng));
    const Vector x = scale * vec({u(rng), u(rng)});
    const double g = gauge_norm(x, disk);
    const int n = shell_index(x, disk).n;
    if (g > 1.0) {
      CHECK(n == 0);
    } else {
      CHECK(n >= 1);
      CHECK(g > 1.0 / (n + 1));
      CHECK(g <= 1.0 / n);
    }
  }
}
