#pragma once

// Experiment configuration (JSON, strict: unknown keys are rejected).
//
// {
//   "space":  {"dim": 3, "weights": [..]},                  weights optional
//   "disk":   {"radii": [..]},
//   "characteristics": {
//     "gamma": [..], "Q": [[..], ..],                        both optional (zero)
//     "levy": {"kind": "zero"}
//           | {"kind": "atomic", "atoms": [{"point": [..], "mass": m}, ..]}
//           | {"kind": "radial_shell", "scale": c, "exponent": p,
//              "outer_mass": m0, "outer_radius": R,
//              "directions": [[..], ..], "direction_weights": [..]}  last four optional
//   },
//   "time":       {"horizon": T, "grid_steps": n},
//   "simulation": {"replicas": M, "seed": s, "shell_cutoff": N},
//   "verification": {"functionals": 20 | [[..], ..], "epsilon": 0.01,
//                    "truncation_levels": [1, 2, 4], "tolerance_z": 4,
//                    "mc_samples": 20000}                    block and keys optional
// }

#include "levy/charfn.hpp"
#include "levy/measure.hpp"
#include "levy/space.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace levy {

/// Malformed or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct VerificationConfig {
  int functional_count = 20;
  std::vector<Vector> explicit_functionals;
  double epsilon = 0.01;
  std::vector<int> truncation_levels{1, 2, 4};
  double tolerance_z = 4.0;
  long mc_samples = 20000;
};

struct ExperimentConfig {
  SpaceModel space{1};
  BanachDisk disk{Vector::Ones(1)};
  Vector gamma;
  Matrix covariance;
  LevyMeasure nu = LevyMeasure::zero(1);
  double horizon = 1.0;
  int grid_steps = 1;
  long replicas = 1;
  std::uint64_t seed = 0;
  int shell_cutoff = 1;
  VerificationConfig verification;
  /// Effective configuration tree (after command-line overrides).
  nlohmann::json tree;

  Eigen::Index dim() const { return gamma.size(); }
  Characteristics characteristics() const;
  std::vector<double> grid() const;
  /// Explicit functionals, or functional_count standard normal vectors
  /// derived from the seed.
  std::vector<Vector> functionals() const;
  /// FNV-1a hash of the canonical JSON dump, as 16 hex digits.
  std::string hash() const;
};

ExperimentConfig parse_config(const nlohmann::json& tree);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Re-parse with seed and/or replica count overridden.
ExperimentConfig with_overrides(const ExperimentConfig& config, std::optional<std::uint64_t> seed,
                                std::optional<long> replicas);

}  // namespace levy
