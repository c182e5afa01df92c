#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "volterra/driver.hpp"
#include "volterra/kernel.hpp"

namespace volterra {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
  smooth_variation,
  by_parts_oracle,
  theorem1,
  theorem2,
  theorem3,
  lemma35,
  lemma36,
  tail_bound,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct KernelConfig {
  std::string kind = "power";  // "power" | "power-log"
  double rho = 0.5;
  double eta = 0.0;

  Kernel build() const;
};

/// One experiment per invocation; sweeps are replica counts. Fixed
/// (config, seed) determines every output byte.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::smooth_variation;
  KernelConfig kernel;
  DriverSpec driver;
  double horizon = 1.0;
  int grid_n = 50;
  std::vector<double> h_schedule;
  std::vector<double> delta_schedule;
  int replicas = 1;
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  double tol = 0.1;  // verdict tolerance for validator/diagnostic reports
  double h0 = 0.5;   // lemma35 split point

  // theorem1: also assert the exact per-h ratio identity at jump probes
  // (single-jump deterministic drivers).
  bool exact_identity = false;

  // theorem2
  int pair_budget = 2000;

  // theorem3 / fractional evaluation
  double frac_d = 0.25;
  double frac_T = 10.0;
  int frac_grid_n = 16384;
  int dyadic_levels = 6;

  // tail-bound
  double tail_a = -10.0;
  double tail_t = 1.0;
  double tail_depth = 50.0;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_json_file(const std::string& path);
  nlohmann::json to_json() const;

  /// Schema and invariant findings; empty means the config is runnable.
  std::vector<std::string> validate() const;
};

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string comparison = "<=";
  bool pass = false;
};

struct Manifest {
  std::string experiment;
  nlohmann::json config_echo;
  std::vector<CheckResult> checks;
  bool pass = false;

  nlohmann::json to_json() const;
};

/// Runs the experiment, writes the per-experiment CSV artifacts plus
/// manifest.json into config.out_dir, and returns the manifest. Throws
/// ConfigError on an invalid config and QuadratureError on a numerical
/// failure; an acceptance failure is reported through manifest.pass.
Manifest run_experiment(const ExperimentConfig& config);

}  // namespace volterra
