// levyito: simulate, decompose and verify Levy processes from their
// characteristics.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage/config error,
// 3 runtime error.

#include "levy/config.hpp"
#include "levy/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kUsageError = 2;
constexpr int kRuntimeError = 3;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<long> replicas;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "Experiment configuration (JSON)")->required();
  cmd->add_option("--seed", opts.seed, "Override simulation.seed");
  cmd->add_option("--replicas", opts.replicas, "Override simulation.replicas");
  cmd->add_option("--jobs", opts.jobs, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
}

levy::ExperimentConfig load(const CommonOptions& opts) {
  return levy::with_overrides(levy::load_config(opts.config), opts.seed, opts.replicas);
}

void write_json(const std::string& path, const nlohmann::json& value) {
  if (path.empty() || path == "-") {
    std::cout << value.dump(2) << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw levy::Error("cannot write " + path);
  out << value.dump(2) << '\n';
}

levy::StoredSimulation load_checked(const std::string& dir, const levy::ExperimentConfig& config,
                                    bool allow_mismatch) {
  auto stored = levy::load_simulation(dir);
  const auto recorded = stored.manifest.value("config_hash", std::string{});
  if (recorded != config.hash() && !allow_mismatch)
    throw levy::DataMismatch("data in " + dir + " were produced from config hash " + recorded +
                             ", not " + config.hash());
  return stored;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy process synthesis, decomposition and verification"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string out;
  std::string data;
  std::string input;
  bool allow_mismatch = false;

  auto* simulate = app.add_subcommand("simulate", "Synthesize paths and write CSV + manifest");
  add_common(simulate, common);
  simulate->add_option("--out", out, "Output directory")->required();

  auto* verify = app.add_subcommand("verify", "Run the statistical checks, write a JSON report");
  add_common(verify, common);
  verify->add_option("--data", data, "Directory written by simulate (default: synthesize fresh)");
  verify->add_option("--out", out, "Report path (default: stdout)");
  verify->add_flag("--allow-mismatch", allow_mismatch,
                   "Check stored data against a config with a different hash");

  auto* decompose = app.add_subcommand("decompose", "Split stored paths into L, J and Y");
  add_common(decompose, common);
  decompose->add_option("--data", data, "Directory written by simulate")->required();
  decompose->add_option("--out", out, "Output directory")->required();
  decompose->add_flag("--allow-mismatch", allow_mismatch, "Skip the config hash check");

  auto* reduce = app.add_subcommand("reduce-check", "Shifted Poisson mass concentration report");
  add_common(reduce, common);
  reduce->add_option("--out", out, "Report path (default: stdout)");

  auto* report = app.add_subcommand("report", "Pretty-print a JSON report");
  report->add_option("input", input, "Report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*report) {
      std::ifstream in(input);
      if (!in) throw levy::ConfigError("cannot read " + input);
      std::cout << nlohmann::json::parse(in).dump(2) << '\n';
      return kOk;
    }
    const auto config = load(common);
    if (*simulate) {
      levy::write_simulation(out, config, levy::simulate(config, common.jobs));
      return kOk;
    }
    if (*verify) {
      std::vector<levy::CadlagPath> paths;
      if (data.empty()) {
        for (auto& b : levy::simulate(config, common.jobs)) paths.push_back(std::move(b.X));
      } else {
        paths = load_checked(data, config, allow_mismatch).paths;
      }
      const auto result = levy::verify(config, paths, common.jobs);
      write_json(out, result.report);
      if (!result.passed) std::cerr << "verification failed\n";
      return result.passed ? kOk : kVerificationFailed;
    }
    if (*decompose) {
      const auto stored = load_checked(data, config, allow_mismatch);
      levy::write_decomposition(out, config, stored.paths, common.jobs);
      return kOk;
    }
    if (*reduce) {
      write_json(out, levy::reduce_check(config));
      return kOk;
    }
  } catch (const levy::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const levy::DataMismatch& e) {
    std::cerr << "data mismatch: " << e.what() << '\n';
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "json error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}
