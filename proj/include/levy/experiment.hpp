#pragma once

// Batch orchestration behind the command-line tool: replica-parallel
// synthesis, file output, verification and reducibility reports.

#include "levy/config.hpp"
#include "levy/decomp.hpp"

#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace levy {

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index
/// is handled exactly once; callers write results by index.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

std::vector<ComponentBundle> simulate(const ExperimentConfig& config, int jobs);

/// Writes paths.csv (X per replica), prm.csv and manifest.json.
void write_simulation(const std::filesystem::path& out_dir, const ExperimentConfig& config,
                      const std::vector<ComponentBundle>& bundles);

struct StoredSimulation {
  std::vector<CadlagPath> paths;
  nlohmann::json manifest;
};
StoredSimulation load_simulation(const std::filesystem::path& dir);

/// Raised when stored data were produced from a different configuration.
class DataMismatch : public Error {
 public:
  using Error::Error;
};

struct VerificationResult {
  nlohmann::json report;
  bool passed = false;
};

/// Runs every statistical check on a set of X paths (synthesized or
/// loaded) against the configured characteristics.
VerificationResult verify(const ExperimentConfig& config, const std::vector<CadlagPath>& paths,
                          int jobs);

/// Writes L.csv, J.csv and Y.csv for the given X paths.
void write_decomposition(const std::filesystem::path& out_dir, const ExperimentConfig& config,
                         const std::vector<CadlagPath>& paths, int jobs);

nlohmann::json reduce_check(const ExperimentConfig& config);

}  // namespace levy
