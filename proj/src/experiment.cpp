#include "levy/experiment.hpp"

#include "levy/io.hpp"
#include "levy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>

namespace levy {
namespace fs = std::filesystem;
using nlohmann::json;

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<ComponentBundle> simulate(const ExperimentConfig& config, int jobs) {
  const Synthesizer synth(config.characteristics(), config.grid(), config.shell_cutoff);
  const StreamFactory streams(config.seed);
  std::vector<std::optional<ComponentBundle>> slots(static_cast<std::size_t>(config.replicas));
  parallel_for(slots.size(), jobs, [&](std::size_t r) { slots[r] = synth.synthesize(streams, r); });
  std::vector<ComponentBundle> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

json manifest_for(const ExperimentConfig& config) {
  return {{"config_hash", config.hash()},
          {"seed", config.seed},
          {"replicas", config.replicas},
          {"dim", config.dim()},
          {"horizon", config.horizon},
          {"grid_steps", config.grid_steps},
          {"shell_cutoff", config.shell_cutoff},
          {"files", {{"paths", "paths.csv"}, {"prm", "prm.csv"}}}};
}

bool passes_fraction(std::size_t good, std::size_t total) {
  return total == 0 || good >= static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(total)));
}

json criterion(bool passed, std::size_t good, std::size_t total, const std::string& rule) {
  return {{"passed", passed}, {"within_tolerance", good}, {"total", total}, {"rule", rule}};
}

}  // namespace

void write_simulation(const fs::path& out_dir, const ExperimentConfig& config,
                      const std::vector<ComponentBundle>& bundles) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<const CadlagPath*> paths;
  std::vector<const PRMSample*> prms;
  for (const auto& b : bundles) {
    paths.push_back(&b.X);
    prms.push_back(&b.prm);
  }
  {
    auto out = open_out(out_dir / "paths.csv");
    io::write_paths_csv(out, paths, config.dim());
  }
  {
    auto out = open_out(out_dir / "prm.csv");
    io::write_prm_csv(out, prms, config.dim());
  }
  auto out = open_out(out_dir / "manifest.json");
  out << manifest_for(config).dump(2) << '\n';
  if (!out) throw Error("failed writing " + (out_dir / "manifest.json").string());
}

StoredSimulation load_simulation(const fs::path& dir) {
  StoredSimulation s;
  std::ifstream manifest(dir / "manifest.json");
  if (!manifest) throw Error("cannot read " + (dir / "manifest.json").string());
  s.manifest = json::parse(manifest);
  std::ifstream in(dir / "paths.csv");
  if (!in) throw Error("cannot read " + (dir / "paths.csv").string());
  auto paths = io::read_paths_csv(in);
  long expected = 0;
  for (auto& [replica, path] : paths) {
    if (replica != expected++) throw Error("paths.csv: replicas must be numbered 0..M-1");
    s.paths.push_back(std::move(path));
  }
  return s;
}

VerificationResult verify(const ExperimentConfig& config, const std::vector<CadlagPath>& paths,
                          int jobs) {
  require(paths.size() >= 2, "verify: need at least two paths");
  const auto c = config.characteristics();
  const auto& disk = config.disk;
  const auto& nu = config.nu;
  const double tol = config.verification.tolerance_z;
  const double horizon = config.horizon;
  const auto grid = config.grid();
  const auto functionals = config.functionals();
  const std::size_t M = paths.size();

  std::vector<std::optional<Analysis>> analyses(M);
  parallel_for(M, jobs, [&](std::size_t r) {
    require(paths[r].dim() == config.dim(), "verify: path dimension differs from config");
    require(std::abs(paths[r].horizon() - horizon) <= 1e-12 * horizon,
            "verify: path horizon differs from config");
    analyses[r] = analyze(paths[r], disk, nu, config.shell_cutoff);
  });

  json report;
  report["config_hash"] = config.hash();
  report["seed"] = config.seed;
  report["replicas"] = M;
  json criteria;

  // Characteristic functionals of X_t.
  std::vector<double> cf_times{horizon};
  if (config.grid_steps % 2 == 0) cf_times.insert(cf_times.begin(), grid[grid.size() / 2]);
  report["cf_reports"] = json::array();
  {
    bool passed = true;
    std::size_t good_all = 0, total_all = 0;
    for (double t : cf_times) {
      std::vector<Vector> samples;
      samples.reserve(M);
      for (const auto& p : paths) samples.push_back(p.value_at(t));
      const auto reports = cf_compare(c, samples, functionals, t);
      std::size_t good = 0;
      for (const auto& r : reports) {
        report["cf_reports"].push_back(io::to_json(r));
        if (r.z_score <= tol) ++good;
      }
      passed = passed && passes_fraction(good, reports.size());
      good_all += good;
      total_all += reports.size();
    }
    criteria["characteristic_function"] =
        criterion(passed, good_all, total_all, ">= 90% of functionals per time with |z| <= tol");
  }

  // Wiener covariance on W = Y - gamma t.
  {
    std::vector<CadlagPath> wiener;
    wiener.reserve(M);
    for (const auto& a : analyses) {
      std::vector<Vector> values;
      for (double t : grid) values.push_back(a->Y.value_at(t) - t * config.gamma);
      wiener.push_back(CadlagPath::continuous(grid, values));
    }
    const double s = grid[grid.size() / 2];
    report["wiener"] = json::array();
    std::size_t good = 0, total = 0;
    const std::size_t pairs = std::min<std::size_t>(5, functionals.size());
    for (std::size_t k = 0; k < pairs; ++k) {
      const auto& a = functionals[k];
      const auto& b = functionals[(k + 1) % functionals.size()];
      for (const auto& [x, y] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
        const auto chk = wiener_cov_check(wiener, config.covariance, *x, *y, s, horizon);
        report["wiener"].push_back({{"a", io::to_json(*x)},
                                    {"b", io::to_json(*y)},
                                    {"s", s},
                                    {"t", horizon},
                                    {"estimate", chk.estimate},
                                    {"target", chk.target},
                                    {"z_score", std::isfinite(chk.z_score) ? json(chk.z_score) : json(nullptr)}});
        if (chk.z_score <= tol) ++good;
        ++total;
      }
    }
    criteria["wiener_covariance"] =
        criterion(passes_fraction(good, total), good, total, ">= 90% of tuples with |z| <= tol");
  }

  // Poisson counts of jumps per shell on (0, T].
  {
    report["counts"] = json::array();
    std::vector<int> active;
    std::map<int, std::vector<double>> counts;
    for (int n = 0; n <= config.shell_cutoff; ++n) {
      if (!(shell_mass(nu, disk, ShellIndex{n}) > 0.0)) continue;
      active.push_back(n);
      auto& v = counts[n];
      for (const auto& p : paths)
        v.push_back(static_cast<double>(count_measure(p, 0.0, horizon, {n}, disk)));
    }
    std::size_t good = 0, total = 0;
    const double m = static_cast<double>(M);
    for (int n : active) {
      const double lambda = horizon * shell_mass(nu, disk, ShellIndex{n});
      const auto& v = counts[n];
      const double mean = stats::mean(v);
      const double var = stats::sample_variance(v);
      const double z_mean = stats::z_score(mean - lambda, std::sqrt(lambda / m));
      const double mu4 = lambda + 3.0 * lambda * lambda;
      const double se_var =
          std::sqrt(std::max(0.0, mu4 / m - lambda * lambda * (m - 3.0) / (m * (m - 1.0))));
      const double z_var = stats::z_score(var - lambda, se_var);
      report["counts"].push_back({{"shell", n},
                                  {"intensity", lambda},
                                  {"mean", mean},
                                  {"variance", var},
                                  {"z_mean", z_mean},
                                  {"z_variance", z_var}});
      good += (z_mean <= tol) + (z_var <= tol);
      total += 2;
    }
    bool moments_ok = good == total;
    std::size_t corr_good = 0, corr_total = 0;
    report["count_correlations"] = json::array();
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        if (M < 4) continue;
        const auto corr = stats::correlation(counts[active[i]], counts[active[j]]);
        if (corr.zero_variance) continue;
        report["count_correlations"].push_back(
            {{"shells", {active[i], active[j]}}, {"correlation", corr.r}, {"z_score", corr.z}});
        corr_good += std::abs(corr.z) <= tol;
        ++corr_total;
      }
    }
    criteria["poisson_counts"] = criterion(moments_ok && passes_fraction(corr_good, corr_total),
                                           good + corr_good, total + corr_total,
                                           "all mean/variance |z| <= tol; >= 90% of cross-shell "
                                           "correlations with |z| <= tol");
  }

  // Independence of J_T, L_T, Y_T.
  std::vector<Vector> J(M), L(M), Y(M);
  for (std::size_t r = 0; r < M; ++r) {
    J[r] = analyses[r]->J.value_at(horizon);
    L[r] = analyses[r]->L.value_at(horizon);
    Y[r] = analyses[r]->Y.value_at(horizon);
  }
  report["independence"] = json::array();
  if (M >= 100) {
    const auto independence = independence_check(J, L, Y, functionals);
    std::size_t good = 0, total = 0;
    for (const auto& s : independence) {
      report["independence"].push_back(io::to_json(s));
      if (s.correlation.zero_variance) continue;
      good += std::abs(s.correlation.z) <= tol;
      ++total;
    }
    criteria["independence"] =
        criterion(passes_fraction(good, total), good, total, ">= 90% of correlations with |z| <= tol");
  } else {
    criteria["independence"] = {{"passed", true}, {"skipped", "fewer than 100 replicas"}};
  }

  // Gaussianity of the residual Y_T.
  report["gaussianity"] = json::array();
  if (M >= 1000) {
    bool passed = true;
    const std::size_t count = std::min<std::size_t>(5, functionals.size());
    for (std::size_t k = 0; k < count; ++k) {
      try {
        const auto g = gaussianity_check(Y, functionals[k]);
        report["gaussianity"].push_back({{"functional", k},
                                         {"skewness", g.skewness},
                                         {"excess_kurtosis", g.excess_kurtosis},
                                         {"z_skewness", g.z_skewness},
                                         {"z_kurtosis", g.z_kurtosis}});
        passed = passed && std::abs(g.z_skewness) <= tol && std::abs(g.z_kurtosis) <= tol;
      } catch (const DegenerateSample&) {
        report["gaussianity"].push_back({{"functional", k}, {"degenerate", true}});
      }
    }
    criteria["gaussianity"] = {{"passed", passed}, {"rule", "all |z| <= tol"}};
  } else {
    criteria["gaussianity"] = {{"passed", true}, {"skipped", "fewer than 1000 replicas"}};
  }

  // Uniform convergence of the compensated series, PRM read off the jumps.
  {
    std::vector<int> levels;
    for (int n = 1; n < config.shell_cutoff; n *= 2) levels.push_back(n);
    levels.push_back(config.shell_cutoff);
    std::vector<std::map<std::pair<int, int>, double>> gaps(M);
    std::map<int, double> tails;
    parallel_for(M, jobs, [&](std::size_t r) {
      PRMSample prm;
      prm.dim = config.dim();
      prm.horizon = horizon;
      prm.shell_cutoff = config.shell_cutoff;
      for (const auto& j : paths[r].jumps()) {
        const auto n = shell_index(j.delta, disk);
        if (n.n <= config.shell_cutoff) prm.atoms.push_back({j.time, j.delta, n});
      }
      std::stable_sort(prm.atoms.begin(), prm.atoms.end(),
                       [](const PRMAtom& a, const PRMAtom& b) { return a.shell < b.shell; });
      gaps[r] = compensated_series(prm, nu, disk, levels, grid).sup_gaps;
    });
    for (int l : levels) tails[l] = horizon * second_moment_tail(nu, disk, l);
    json conv{{"levels", levels}, {"sup_gaps", json::array()}, {"tail_bounds", json::array()}};
    bool passed = true;
    for (int l : levels) conv["tail_bounds"].push_back(tails[l]);
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      const std::pair key{levels[i], levels[i + 1]};
      std::vector<double> sq(M);
      for (std::size_t r = 0; r < M; ++r) sq[r] = gaps[r].at(key) * gaps[r].at(key);
      const double mean_sq = stats::mean(sq);
      const double bound = 4.0 * tails[levels[i]];
      const bool ok = mean_sq <= bound;
      passed = passed && ok;
      conv["sup_gaps"].push_back({{"from", key.first},
                                  {"to", key.second},
                                  {"mean_sup_sq", mean_sq},
                                  {"bound", bound},
                                  {"passed", ok}});
    }
    report["convergence"] = conv;
    criteria["compensated_series"] = {{"passed", passed},
                                      {"rule", "mean sup gap^2 <= 4 * tail variance"}};
  }

  // Reducibility diagnostic (informational).
  try {
    ReducibilityOptions opts;
    opts.seed = config.seed;
    opts.mc_samples = config.verification.mc_samples;
    report["reducibility"] = io::to_json(reducibility_check(nu, disk, config.verification.epsilon,
                                                            config.verification.truncation_levels,
                                                            opts));
  } catch (const Error& e) {
    report["reducibility"] = {{"error", e.what()}};
  }

  bool passed = true;
  for (const auto& [name, crit] : criteria.items()) passed = passed && crit.at("passed").get<bool>();
  report["criteria"] = criteria;
  report["passed"] = passed;
  return {report, passed};
}

void write_decomposition(const fs::path& out_dir, const ExperimentConfig& config,
                         const std::vector<CadlagPath>& paths, int jobs) {
  std::vector<std::optional<Analysis>> analyses(paths.size());
  parallel_for(paths.size(), jobs, [&](std::size_t r) {
    analyses[r] = analyze(paths[r], config.disk, config.nu, config.shell_cutoff);
  });
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create " + out_dir.string() + ": " + ec.message());
  for (const auto& [name, member] : {std::pair{"L.csv", &Analysis::L}, std::pair{"J.csv", &Analysis::J},
                                     std::pair{"Y.csv", &Analysis::Y}}) {
    std::vector<const CadlagPath*> ptrs;
    for (const auto& a : analyses) ptrs.push_back(&((*a).*member));
    auto out = open_out(out_dir / name);
    io::write_paths_csv(out, ptrs, config.dim());
  }
}

json reduce_check(const ExperimentConfig& config) {
  ReducibilityOptions opts;
  opts.seed = config.seed;
  opts.mc_samples = config.verification.mc_samples;
  json out = io::to_json(reducibility_check(config.nu, config.disk, config.verification.epsilon,
                                            config.verification.truncation_levels, opts));
  out["config_hash"] = config.hash();
  return out;
}

}  // namespace levy
