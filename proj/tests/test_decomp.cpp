#include "levy/decomp.hpp"
#include "test_util.hpp"

using namespace levy;
using levy::test::close;
using levy::test::vec;

namespace {

Characteristics atomic3d() {
  Matrix q(3, 3);
  q << 1.0, 0.5, 0.2, 0.5, 0.89, -0.22, 0.2, -0.22, 0.2;
  auto nu = LevyMeasure::atomic(3, {{vec({0.6, 0.0, 0.0}), 2.0},
                                    {vec({0.0, 0.15, 0.1}), 3.0},
                                    {vec({1.5, -0.5, 0.0}), 0.5},
                                    {vec({0.0, 0.0, -2.0}), 0.3}});
  return Characteristics(vec({0.3, -0.2, 0.1}), q, nu, BanachDisk(vec({1.0, 0.5, 1.0})));
}

std::vector<ComponentBundle> bundles(const Characteristics& c, int count, std::uint64_t seed,
                                     int steps = 4, int cutoff = 4) {
  const Synthesizer synth(c, uniform_grid(1.0, steps), cutoff);
  const StreamFactory streams(seed);
  std::vector<ComponentBundle> out;
  out.reserve(count);
  for (int r = 0; r < count; ++r) out.push_back(synth.synthesize(streams, r));
  return out;
}

// P(N = k) for N ~ Poisson(mean).
double poisson_pmf(double mean, int k) {
  return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
}

}  // namespace

TEST_CASE("drift-only synthesis is a straight line") {
  const Vector gamma = vec({1.0, -0.5});
  const Characteristics c(gamma, Matrix::Zero(2, 2), LevyMeasure::zero(2), BanachDisk::unit(2));
  const auto b = synthesize(c, uniform_grid(2.0, 8), 3, StreamFactory(1), 0);
  for (const auto& k : b.X.knots()) CHECK(k.value == Vector(k.time * gamma));
  CHECK(b.X.jumps().empty());
}

TEST_CASE("bundle sum identity and jump separation") {
  const auto c = atomic3d();
  for (const auto& b : bundles(c, 50, 3)) {
    CHECK(b.X.value_at(0.0).isZero(0.0));
    for (const auto& k : b.X.knots()) {
      const Vector sum = b.drift.value_at(k.time) + b.W.value_at(k.time) + b.J.value_at(k.time) +
                         b.L.value_at(k.time);
      CHECK(k.value == sum);
    }
    for (const auto& j : b.L.jumps()) CHECK(gauge_norm(j.delta, c.disk()) > 1.0);
    for (const auto& j : b.J.jumps()) CHECK(gauge_norm(j.delta, c.disk()) <= 1.0);
    CHECK(b.L.jumps().size() + b.J.jumps().size() == b.X.jumps().size());
    CHECK(b.W.jumps().empty());
  }
}

TEST_CASE("analyze recovers synthesized components exactly") {
  const auto c = atomic3d();
  for (const auto& b : bundles(c, 50, 4)) {
    const auto a = analyze(b.X, c.disk(), c.nu(), b.truncation);
    REQUIRE(a.L.knots().size() == b.L.knots().size());
    REQUIRE(a.J.knots().size() == b.J.knots().size());
    for (std::size_t i = 0; i < a.L.knots().size(); ++i) {
      CHECK(a.L.knots()[i].time == b.L.knots()[i].time);
      CHECK(a.L.knots()[i].value == b.L.knots()[i].value);
      CHECK(a.L.knots()[i].delta == b.L.knots()[i].delta);
    }
    for (std::size_t i = 0; i < a.J.knots().size(); ++i) {
      CHECK(a.J.knots()[i].time == b.J.knots()[i].time);
      CHECK(a.J.knots()[i].value == b.J.knots()[i].value);
      CHECK(a.J.knots()[i].delta == b.J.knots()[i].delta);
    }
    CHECK(a.Y.jumps().empty());
    for (const auto& k : a.Y.knots()) {
      const Vector expected = b.drift.value_at(k.time) + b.W.value_at(k.time);
      CHECK(close(k.value, expected, 1e-12));
      CHECK(close(k.value, b.residual_at(k.time), 0.0));
    }
  }
}

TEST_CASE("analyze of a jump-free path") {
  const auto c = atomic3d();
  std::vector<Vector> values;
  const auto grid = uniform_grid(1.0, 5);
  for (double t : grid) values.push_back(vec({t, -t * t, 0.5}));
  values[0] = Vector::Zero(3);
  const auto X = CadlagPath::continuous(grid, values);
  const auto a = analyze(X, c.disk(), c.nu(), 0);
  for (const auto& k : a.L.knots()) CHECK(k.value.isZero(0.0));
  for (const auto& k : a.J.knots()) CHECK(k.value.isZero(0.0));
  for (std::size_t i = 0; i < X.knots().size(); ++i) CHECK(a.Y.knots()[i].value == X.knots()[i].value);
  CHECK_THROWS_AS(analyze(X, BanachDisk::unit(2), c.nu(), 1), InvalidArgument);
}

TEST_CASE("analyze leaves deep jumps in the residual") {
  const BanachDisk disk = BanachDisk::unit(1);
  const auto nu = LevyMeasure::atomic(1, {{vec({0.6}), 1.0}, {vec({0.05}), 1.0}});
  const std::vector<Jump> jumps{{0.3, vec({0.6})}, {0.5, vec({0.05})}, {0.7, vec({1.5})}};
  const auto X = CadlagPath::assemble({0.0, 1.0}, jumps, [&](double t) {
    Vector v = Vector::Zero(1);
    for (const auto& j : jumps)
      if (j.time <= t) v += j.delta;
    return v;
  });
  const auto a = analyze(X, disk, nu, 4);
  REQUIRE(a.Y.jumps().size() == 1);
  CHECK(gauge_norm(a.Y.jumps()[0].delta, disk) <= 1.0 / 5.0);
  CHECK(a.L.jumps().size() == 1);
  CHECK(a.J.jumps().size() == 1);
  CHECK(a.J.value_at(1.0)[0] == doctest::Approx(0.6 - 0.6));
}

TEST_CASE("components carry their reduced characteristics") {
  const auto c = atomic3d();
  const auto bs = bundles(c, 4000, 5);
  std::vector<Vector> W, J, L, X;
  for (const auto& b : bs) {
    W.push_back(b.W.value_at(1.0));
    J.push_back(b.J.value_at(1.0));
    L.push_back(b.L.value_at(1.0));
    X.push_back(b.X.value_at(1.0));
  }
  const std::vector<Vector> functionals{vec({0.5, -1.0, 0.8}), vec({-1.2, 0.3, 0.4}),
                                        vec({0.2, 1.5, -1.0})};
  for (const auto& a : functionals) {
    const auto w = empirical_cf(W, a);
    CHECK(std::abs(w.value - std::exp(-0.5 * a.dot(c.covariance() * a))) <= 4.0 * w.stderr_value);
    const auto l = empirical_cf(L, a);
    CHECK(std::abs(l.value - std::exp(jump_exponent(c.nu(), c.disk(), a, 0, 0))) <=
          4.0 * l.stderr_value);
    const auto j = empirical_cf(J, a);
    CHECK(std::abs(j.value - std::exp(jump_exponent(c.nu(), c.disk(), a, 1, 4))) <=
          4.0 * j.stderr_value);
    const auto x = empirical_cf(X, a);
    CHECK(std::abs(x.value - cf_at_time(c, a, 1.0)) <= 4.0 * x.stderr_value);
  }
}

TEST_CASE("independence_check") {
  const auto c = atomic3d();
  const auto bs = bundles(c, 2000, 6);
  const std::vector<Vector> functionals{vec({0.5, -1.0, 0.8}), vec({-1.2, 0.3, 0.4})};
  const auto stats_ = independence_check(bs, functionals, 1.0);
  CHECK(stats_.size() == 2 * 3 * 3);
  int passed = 0;
  for (const auto& s : stats_) passed += std::abs(s.correlation.z) <= 4.0 ? 1 : 0;
  CHECK(passed >= 17);

  std::vector<Vector> J, L, Y;
  for (const auto& b : bs) {
    J.push_back(b.J.value_at(1.0));
    L.push_back(b.L.value_at(1.0));
    Y.push_back(b.residual_at(1.0));
  }
  for (const auto& s : independence_check(J, J, Y, functionals))
    if (s.pair == "J-L") CHECK(std::abs(s.correlation.z) > 4.0);

  CHECK_THROWS_AS(independence_check(std::vector<ComponentBundle>(bs.begin(), bs.begin() + 99),
                                     functionals, 1.0),
                  InvalidArgument);
}

TEST_CASE("independence_check flags a missing large-jump part") {
  Matrix q = Matrix::Identity(2, 2);
  const Characteristics c(Vector::Zero(2), q,
                          LevyMeasure::atomic(2, {{vec({0.4, 0.1}), 1.0}}), BanachDisk::unit(2));
  const auto bs = bundles(c, 200, 7, 2, 3);
  for (const auto& s : independence_check(bs, {vec({1.0, 1.0})}, 1.0)) {
    if (s.pair == "J-L" || s.pair == "L-Y")
      CHECK(s.correlation.zero_variance);
    else
      CHECK_FALSE(s.correlation.zero_variance);
  }
}

TEST_CASE("gaussianity_check") {
  Matrix q(2, 2);
  q << 1.0, 0.4, 0.4, 0.5;
  const Characteristics gauss(vec({0.2, 0.1}), q, LevyMeasure::zero(2), BanachDisk::unit(2));
  const auto bs = bundles(gauss, 4000, 8);
  std::vector<Vector> Y;
  for (const auto& b : bs) Y.push_back(b.residual_at(1.0));
  for (const auto& a : {vec({1.0, 0.0}), vec({0.3, -1.0}), vec({1.0, 1.0})}) {
    const auto r = gaussianity_check(Y, a);
    CHECK(std::abs(r.z_skewness) <= 4.0);
    CHECK(std::abs(r.z_kurtosis) <= 4.0);
  }

  std::vector<Vector> constant(2000, vec({0.2, 0.1}));
  CHECK_THROWS_AS(gaussianity_check(constant, vec({1.0, 1.0})), DegenerateSample);
  CHECK_THROWS_AS(gaussianity_check(std::vector<Vector>(Y.begin(), Y.begin() + 999), vec({1.0, 0.0})),
                  InvalidArgument);

  // Sparse compound Poisson: excess kurtosis 1 / rate = 10.
  const Characteristics sparse(Vector::Zero(2), Matrix::Zero(2, 2),
                               LevyMeasure::atomic(2, {{vec({2.0, 0.0}), 0.1}}),
                               BanachDisk::unit(2));
  std::vector<Vector> L;
  for (const auto& b : bundles(sparse, 10000, 9, 1, 1)) L.push_back(b.L.value_at(1.0));
  const auto r = gaussianity_check(L, vec({1.0, 0.0}));
  CHECK(r.excess_kurtosis == doctest::Approx(10.0).epsilon(0.5));
  CHECK(r.z_kurtosis > 4.0);
}

TEST_CASE("moment_check standard errors") {
  // Symmetric two-point law: skewness 0, excess kurtosis -2.
  std::vector<double> v;
  for (int i = 0; i < 2000; ++i) v.push_back(i % 2 == 0 ? 1.0 : -1.0);
  const auto r = moment_check(v);
  CHECK(r.skewness == doctest::Approx(0.0));
  CHECK(r.excess_kurtosis == doctest::Approx(-2.0));
  const double n = 2000.0;
  const double ses = std::sqrt(6.0 * n * (n - 1) / ((n - 2) * (n + 1) * (n + 3)));
  const double sek = 2.0 * ses * std::sqrt((n * n - 1) / ((n - 3) * (n + 5)));
  CHECK(r.z_kurtosis == doctest::Approx(-2.0 / sek));
}

TEST_CASE("reducibility of the zero measure") {
  const auto r = reducibility_check(LevyMeasure::zero(2), BanachDisk::unit(2), 0.01, {1, 2});
  for (const auto& l : r.levels) {
    CHECK(l.m == 1);
    CHECK(l.shift.isZero(0.0));
  }
  CHECK(r.monotone_flag);
}

TEST_CASE("reducibility of a single atom matches the Poisson tail") {
  const BanachDisk disk = BanachDisk::unit(1);
  const auto nu = LevyMeasure::atomic(1, {{vec({0.6}), 2.0}});
  for (double eps : {0.3, 0.1, 0.01, 0.001, 1e-6}) {
    // Shifted law: 0.6 (k - 2), k ~ Poisson(2).
    int oracle = 0;
    for (int m = 1; m <= 100 && oracle == 0; ++m) {
      double inside = 0.0;
      for (int k = 0; k <= 50; ++k)
        if (std::abs(k - 2) * 0.6 <= m) inside += poisson_pmf(2.0, k);
      if (inside > 1.0 - eps) oracle = m;
    }
    const auto r = reducibility_check(nu, disk, eps, {1, 2, 4});
    for (const auto& l : r.levels) {
      CHECK(l.m == oracle);
      CHECK(l.shift[0] == doctest::Approx(-1.2));
      CHECK(l.method == "series");
    }
    CHECK(r.monotone_flag);
  }
}

TEST_CASE("reducibility of a symmetric atom pair matches brute-force convolution") {
  const BanachDisk disk(vec({1.0, 0.5}));
  const Vector x0 = vec({0.4, 0.3});
  const auto nu = LevyMeasure::atomic(2, {{x0, 1.5}, {Vector(-x0), 1.5}});
  for (double eps : {0.1, 0.01}) {
    int oracle = 0;
    for (int m = 1; m <= 100 && oracle == 0; ++m) {
      double inside = 0.0;
      for (int i = 0; i <= 50; ++i)
        for (int j = 0; j <= 50; ++j)
          if (gauge_norm(Vector((i - j) * x0), disk) <= m * (1 + 1e-12))
            inside += poisson_pmf(1.5, i) * poisson_pmf(1.5, j);
      if (inside > 1.0 - eps) oracle = m;
    }
    const auto r = reducibility_check(nu, disk, eps, {2});
    CHECK(r.levels[0].m == oracle);
    CHECK(r.levels[0].shift.isZero(0.0));
  }
}

TEST_CASE("reducibility radii are nonincreasing in epsilon") {
  const auto c = atomic3d();
  int previous = std::numeric_limits<int>::max();
  for (double eps : {1e-6, 1e-4, 0.01, 0.1, 0.5}) {
    const auto r = reducibility_check(c.nu(), c.disk(), eps, {1, 2, 3, 4});
    CHECK(r.levels.back().m <= previous);
    CHECK(r.monotone_flag);
    previous = r.levels.back().m;
  }
}

TEST_CASE("reducibility by Monte Carlo on a radial measure") {
  RadialShellParams p;
  p.dim = 2;
  p.exponent = -1.0;
  const auto nu = LevyMeasure::radial_shell(p);
  ReducibilityOptions opt;
  opt.mc_samples = 5000;
  const auto r = reducibility_check(nu, BanachDisk::unit(2), 0.01, {2, 4, 8}, opt);
  for (const auto& l : r.levels) {
    CHECK(l.method == "monte_carlo");
    CHECK(l.m >= 1);
    CHECK(l.mass_inside > 0.99);
    CHECK(l.shift.isZero(0.0));
  }
  CHECK(r.monotone_flag);
}

TEST_CASE("reducibility errors") {
  const auto nu = LevyMeasure::atomic(1, {{vec({0.6}), 2.0}});
  const BanachDisk disk = BanachDisk::unit(1);
  CHECK_THROWS_AS(reducibility_check(nu, disk, 1.5, {1}), InvalidArgument);
  CHECK_THROWS_AS(reducibility_check(nu, disk, 0.0, {1}), InvalidArgument);
  CHECK_THROWS_AS(reducibility_check(nu, disk, 0.1, {}), InvalidArgument);
  ReducibilityOptions tight;
  tight.max_radius = 1;
  CHECK_THROWS_AS(reducibility_check(nu, disk, 1e-9, {1}, tight), BudgetExceeded);
}
