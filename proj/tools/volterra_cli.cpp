// Experiment runner: `volterra run <config.json>` executes one experiment
// and writes its CSV artifacts plus manifest.json; `volterra validate`
// checks a config without running it.
//
// Exit codes: 0 pass, 2 config error, 3 acceptance failure, 4 numerical
// failure (quadrature cap).

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "volterra/experiment.hpp"
#include "volterra/quadrature.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAcceptance = 3;
constexpr int kExitNumerical = 4;

void print_manifest(const volterra::Manifest& m) {
  for (const auto& c : m.checks) {
    std::cout << (c.pass ? "  [pass] " : "  [FAIL] ") << c.name << " = "
              << c.measured << " (" << c.comparison << " " << c.threshold
              << ")\n";
  }
  std::cout << m.experiment << ": " << (m.pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volterra-process simulation and path-regularity experiments"};
  app.require_subcommand(1);

  std::string run_config, out_override;
  std::uint64_t seed_override = 0;
  int replicas_override = 0;
  bool has_seed = false;

  auto* run = app.add_subcommand("run", "run one experiment from a config");
  run->add_option("config", run_config, "experiment config (JSON)")
      ->required();
  run->add_option("--out", out_override, "override config.out_dir");
  auto* seed_opt =
      run->add_option("--seed", seed_override, "override config.seed");
  run->add_option("--replicas", replicas_override,
                  "override config.replicas");

  std::string validate_config;
  auto* validate =
      app.add_subcommand("validate", "check a config without running");
  validate->add_option("config", validate_config, "experiment config (JSON)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) {
      const auto cfg =
          volterra::ExperimentConfig::from_json_file(validate_config);
      const auto findings = cfg.validate();
      if (findings.empty()) {
        std::cout << "config ok: " << volterra::to_string(cfg.experiment)
                  << "\n";
        return kExitPass;
      }
      for (const auto& f : findings) {
        std::cerr << validate_config << ": " << f << "\n";
      }
      return kExitConfig;
    }

    auto cfg = volterra::ExperimentConfig::from_json_file(run_config);
    if (!out_override.empty()) cfg.out_dir = out_override;
    has_seed = seed_opt->count() > 0;
    if (has_seed) cfg.seed = seed_override;
    if (replicas_override > 0) cfg.replicas = replicas_override;

    const auto manifest = volterra::run_experiment(cfg);
    print_manifest(manifest);
    return manifest.pass ? kExitPass : kExitAcceptance;
  } catch (const volterra::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const volterra::QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
