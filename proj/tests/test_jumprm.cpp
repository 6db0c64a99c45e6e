#include "levy/jumprm.hpp"
#include "levy/stats.hpp"
#include "test_util.hpp"

using namespace levy;
using levy::test::close;
using levy::test::vec;

namespace {

LevyMeasure three_shells() {
  return LevyMeasure::atomic(2, {{vec({0.6, 0.1}), 2.0},
                                 {vec({-0.2, 0.3}), 1.0},
                                 {vec({0.15, -0.05}), 1.5},
                                 {vec({1.8, 0.0}), 0.4}});
}

PRMSample manual_prm(std::vector<PRMAtom> atoms, int cutoff) {
  PRMSample prm;
  prm.dim = 2;
  prm.horizon = 1.0;
  prm.shell_cutoff = cutoff;
  prm.atoms = std::move(atoms);
  return prm;
}

RadialShellParams harmonic() {
  RadialShellParams p;
  p.dim = 2;
  p.exponent = -1.0;
  return p;
}

}  // namespace

TEST_CASE("zero measure has no atoms") {
  const auto prm = sample_prm(LevyMeasure::zero(2), BanachDisk::unit(2), 2.0, 5, StreamFactory(1), 0);
  CHECK(prm.atoms.empty());
  CHECK(large_jump_process(prm, 1.0).isZero(0.0));
  CHECK(large_jump_process(prm, 1.0).size() == 2);
}

TEST_CASE("sampled PRM is valid and reproducible") {
  const BanachDisk disk = BanachDisk::unit(2);
  const auto nu = three_shells();
  const StreamFactory streams(42);
  const auto a = sample_prm(nu, disk, 3.0, 4, streams, 7);
  const auto b = sample_prm(nu, disk, 3.0, 4, streams, 7);
  CHECK_NOTHROW(validate_prm(a, disk));
  REQUIRE(a.atoms.size() == b.atoms.size());
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    CHECK(a.atoms[i].time == b.atoms[i].time);
    CHECK(a.atoms[i].mark == b.atoms[i].mark);
  }
  for (std::size_t i = 1; i < a.atoms.size(); ++i) {
    CHECK(a.atoms[i - 1].shell <= a.atoms[i].shell);
    if (a.atoms[i - 1].shell == a.atoms[i].shell) CHECK(a.atoms[i - 1].time <= a.atoms[i].time);
  }
  const auto timeline = a.timeline();
  CHECK(std::is_sorted(timeline.begin(), timeline.end(),
                       [](const PRMAtom& x, const PRMAtom& y) { return x.time < y.time; }));

  auto bad = a;
  if (!bad.atoms.empty()) {
    bad.atoms[0].shell = ShellIndex{9};
    CHECK_THROWS_AS(validate_prm(bad, disk), InvalidArgument);
  }
  CHECK_THROWS_AS(sample_prm(nu, disk, 0.0, 4, streams, 0), InvalidArgument);
  CHECK_THROWS_AS(sample_prm(nu, disk, 1.0, 0, streams, 0), InvalidArgument);
}

TEST_CASE("shell counts are Poisson and independent") {
  const BanachDisk disk = BanachDisk::unit(1);
  const auto nu = LevyMeasure::atomic(1, {{vec({0.6}), 2.0}, {vec({0.3}), 1.0}});
  const StreamFactory streams(2024);
  constexpr int kReplicas = 10000;
  std::vector<double> c1, c3;
  for (int r = 0; r < kReplicas; ++r) {
    const auto prm = sample_prm(nu, disk, 3.0, 3, streams, r);
    c1.push_back(static_cast<double>(prm.count(0.0, 3.0, ShellIndex{1})));
    c3.push_back(static_cast<double>(prm.count(0.0, 3.0, ShellIndex{3})));
  }
  // Poisson(6): mean 6, variance 6, Var(S^2) ~ 2 sigma^4 + kappa_4 = 72 + 6.
  const double mean = stats::mean(c1);
  CHECK(std::abs(mean - 6.0) / std::sqrt(6.0 / kReplicas) <= 3.0);
  const double var = stats::sample_variance(c1);
  CHECK(std::abs(var - 6.0) / std::sqrt(78.0 / kReplicas) <= 3.0);
  CHECK(std::abs(stats::mean(c3) - 3.0) / std::sqrt(3.0 / kReplicas) <= 3.0);
  CHECK(std::abs(stats::correlation(c1, c3).r) * std::sqrt(double(kReplicas)) <= 3.0);
}

TEST_CASE("large_jump_process") {
  const Vector x1 = vec({1.5, 0.0});
  const Vector x2 = vec({0.0, -3.0});
  const auto prm = manual_prm({{0.5, x1, ShellIndex{0}}, {0.8, x2, ShellIndex{0}},
                               {0.2, vec({0.6, 0.0}), ShellIndex{1}}},
                              2);
  CHECK(large_jump_process(prm, 1.0) == x1 + x2);
  CHECK(large_jump_process(prm, 0.5) == x1);
  CHECK(large_jump_process(prm, 0.3).isZero(0.0));
  CHECK(large_jump_process(prm, 0.0).isZero(0.0));
  CHECK_THROWS_AS(large_jump_process(prm, 1.5), InvalidArgument);
  CHECK_THROWS_AS(large_jump_process(prm, -0.5), InvalidArgument);

  const auto none = manual_prm({{0.2, vec({0.6, 0.0}), ShellIndex{1}}}, 2);
  for (double t : {0.0, 0.3, 1.0}) CHECK(large_jump_process(none, t).isZero(0.0));
}

TEST_CASE("compensated_shell_term") {
  const BanachDisk disk = BanachDisk::unit(2);
  const auto nu = three_shells();
  const auto empty = manual_prm({}, 5);
  const Vector comp = shell_compensator(nu, disk, ShellIndex{1});
  CHECK(close(compensated_shell_term(empty, nu, disk, 1, 0.7), Vector(-0.7 * comp), 1e-16));
  CHECK_THROWS_AS(compensated_shell_term(empty, nu, disk, 6, 0.5), InvalidArgument);
  CHECK_THROWS_AS(compensated_shell_term(empty, nu, disk, 0, 0.5), InvalidArgument);

  const auto symmetric = LevyMeasure::atomic(2, {{vec({0.6, 0.0}), 1.0}, {vec({-0.6, 0.0}), 1.0}});
  const auto prm = manual_prm({{0.3, vec({0.6, 0.0}), ShellIndex{1}},
                               {0.6, vec({-0.6, 0.0}), ShellIndex{1}},
                               {0.9, vec({0.6, 0.0}), ShellIndex{1}}},
                              1);
  CHECK(compensated_shell_term(prm, symmetric, disk, 1, 1.0) == vec({0.6, 0.0}));
  CHECK(compensated_shell_term(prm, symmetric, disk, 1, 0.7).isZero(0.0));
}

TEST_CASE("compensation centers each shell") {
  const BanachDisk disk = BanachDisk::unit(2);
  const auto nu = three_shells();
  const StreamFactory streams(77);
  const Vector a = vec({1.0, -2.0});
  constexpr int kReplicas = 10000;
  std::vector<double> s1, s2, s3;
  for (int r = 0; r < kReplicas; ++r) {
    const auto prm = sample_prm(nu, disk, 1.0, 6, streams, r);
    s1.push_back(compensated_shell_term(prm, nu, disk, 1, 1.0).dot(a));
    s2.push_back(compensated_shell_term(prm, nu, disk, 3, 1.0).dot(a));
    s3.push_back(compensated_shell_term(prm, nu, disk, 6, 1.0).dot(a));
  }
  CHECK(std::abs(stats::mean(s1)) / stats::standard_error(s1) <= 3.0);
  CHECK(std::abs(stats::mean(s2)) / stats::standard_error(s2) <= 3.0);
  CHECK(std::abs(stats::mean(s3)) / stats::standard_error(s3) <= 3.0);
  CHECK(std::abs(stats::correlation(s1, s2).r) * std::sqrt(double(kReplicas)) <= 3.0);
  CHECK(std::abs(stats::correlation(s2, s3).r) * std::sqrt(double(kReplicas)) <= 3.0);
}

TEST_CASE("PRM counts round-trip through windows") {
  const BanachDisk disk = BanachDisk::unit(2);
  const auto prm = sample_prm(three_shells(), disk, 2.0, 6, StreamFactory(3), 1);
  for (int n = 0; n <= 6; ++n) {
    long total = 0;
    for (int w = 0; w < 8; ++w) total += prm.count(w * 0.25, (w + 1) * 0.25, ShellIndex{n});
    const long direct = std::count_if(prm.atoms.begin(), prm.atoms.end(),
                                      [n](const PRMAtom& a) { return a.shell.n == n; });
    CHECK(total == direct);
  }
}

TEST_CASE("truncated compensated sum is cadlag and linear between jumps") {
  const BanachDisk disk = BanachDisk::unit(2);
  const auto nu = three_shells();
  const auto prm = sample_prm(nu, disk, 1.0, 6, StreamFactory(8), 2);
  const auto sum = TruncatedCompensatedSum::from_prm(prm, nu, disk, 6);
  Vector drift = Vector::Zero(2);
  for (int n = 1; n <= 6; ++n) drift += shell_compensator(nu, disk, ShellIndex{n});
  CHECK(close(sum.value(0.0), Vector::Zero(2), 0.0));
  Vector jumps = Vector::Zero(2);
  for (const auto& j : sum.jumps()) {
    CHECK(close(Vector(sum.value(j.time) - sum.left_limit(j.time)), j.mark, 1e-14));
    jumps += j.mark;
  }
  CHECK(close(sum.value(1.0), Vector(jumps - drift), 1e-13));
  Vector by_shell = Vector::Zero(2);
  for (int n = 1; n <= 6; ++n) by_shell += compensated_shell_term(prm, nu, disk, n, 1.0);
  CHECK(close(sum.value(1.0), by_shell, 1e-13));
  const auto path = sum.path(uniform_grid(1.0, 10));
  CHECK(path.jumps().size() == sum.jumps().size());
  CHECK_THROWS_AS(TruncatedCompensatedSum::from_prm(prm, nu, disk, 7), InvalidArgument);
}

TEST_CASE("compensated_series examples") {
  const BanachDisk disk = BanachDisk::unit(2);
  SUBCASE("measure outside K only") {
    const auto nu = LevyMeasure::atomic(2, {{vec({2.0, 0.0}), 3.0}});
    const auto prm = sample_prm(nu, disk, 1.0, 4, StreamFactory(5), 0);
    const auto res = compensated_series(prm, nu, disk, {1, 2, 4}, uniform_grid(1.0, 4));
    for (const auto& [level, values] : res.partial_sums)
      for (const auto& v : values) CHECK(v.isZero(0.0));
    for (const auto& [pair, gap] : res.sup_gaps) CHECK(gap == 0.0);
  }
  SUBCASE("finitely many active shells") {
    const auto nu = three_shells();
    const auto prm = sample_prm(nu, disk, 1.0, 10, StreamFactory(6), 0);
    const auto res = compensated_series(prm, nu, disk, {6, 7, 10}, uniform_grid(1.0, 4));
    CHECK(res.sup_gaps.at({6, 7}) == 0.0);
    CHECK(res.sup_gaps.at({7, 10}) == 0.0);
    CHECK(res.tail_variance_bound.at(6) == 0.0);
    const auto shallow = compensated_series(prm, nu, disk, {1, 6}, {});
    CHECK(shallow.sup_gaps.at({1, 6}) > 0.0);
    CHECK(shallow.tail_variance_bound.at(1) > 0.0);
    CHECK(std::find(shallow.eval_times.begin(), shallow.eval_times.end(), 1.0) !=
          shallow.eval_times.end());
  }
  SUBCASE("errors") {
    const auto nu = three_shells();
    const auto prm = sample_prm(nu, disk, 1.0, 4, StreamFactory(6), 0);
    CHECK_THROWS_AS(compensated_series(prm, nu, disk, {2, 8}, {}), InvalidArgument);
    CHECK_THROWS_AS(compensated_series(prm, nu, disk, {}, {}), InvalidArgument);
    CHECK_THROWS_AS(compensated_series(prm, nu, disk, {1}, {2.0}), InvalidArgument);
  }
}

TEST_CASE("tail bounds decrease and dominate observed gaps") {
  const BanachDisk disk = BanachDisk::unit(2);
  const auto nu = LevyMeasure::radial_shell(harmonic());
  const StreamFactory streams(11);
  constexpr int kReplicas = 400;
  std::map<std::pair<int, int>, double> mean_sq;
  std::map<int, double> tails;
  for (int r = 0; r < kReplicas; ++r) {
    const auto prm = sample_prm(nu, disk, 1.0, 16, streams, r);
    const auto res = compensated_series(prm, nu, disk, {2, 4, 8, 16}, uniform_grid(1.0, 8));
    for (const auto& [pair, gap] : res.sup_gaps) mean_sq[pair] += gap * gap / kReplicas;
    tails = res.tail_variance_bound;
  }
  CHECK(tails.at(2) > tails.at(4));
  CHECK(tails.at(4) > tails.at(8));
  CHECK(tails.at(8) > tails.at(16));
  for (const auto& [pair, ms] : mean_sq) CHECK(ms <= 4.0 * tails.at(pair.first));
}
