#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "volterra/experiment.hpp"

using namespace volterra;

namespace {

nlohmann::json base_config(const std::string& experiment) {
  return nlohmann::json{
      {"experiment", experiment},
      {"kernel", {{"kind", "power"}, {"rho", 0.5}, {"eta", 0.0}}},
      {"driver",
       {{"kind", "compound-poisson"},
        {"jump_intensity", 5.0},
        {"jump_law", {{"kind", "normal"}, {"mu", 0.0}, {"sigma", 1.0}}},
        {"seed", 7}}},
      {"seed", 11},
      {"out_dir", "exp_test_out"},
  };
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("validate flags rho outside (0,1)") {
  auto j = base_config("smooth-variation");
  j["kernel"]["rho"] = 1.5;
  j["h_schedule"] = {1e-2, 1e-3, 1e-4};
  const auto cfg = ExperimentConfig::from_json(j);
  const auto findings = cfg.validate();
  REQUIRE(!findings.empty());
  bool mentions_interval = false;
  for (const auto& f : findings) {
    if (f.find("(0, 1)") != std::string::npos) mentions_interval = true;
  }
  CHECK(mentions_interval);
}

TEST_CASE("validate flags a fractional driver with a Brownian component") {
  auto j = base_config("theorem3");
  j["driver"]["kind"] = "cp-with-diffusion";
  j["driver"]["diffusion_vol"] = 0.5;
  const auto cfg = ExperimentConfig::from_json(j);
  const auto findings = cfg.validate();
  bool mentions_brownian = false;
  for (const auto& f : findings) {
    if (f.find("Brownian") != std::string::npos) mentions_brownian = true;
  }
  CHECK(mentions_brownian);
}

TEST_CASE("validate flags an increasing h_schedule") {
  auto j = base_config("theorem1");
  j["h_schedule"] = {1e-4, 1e-3, 1e-2};
  const auto cfg = ExperimentConfig::from_json(j);
  const auto findings = cfg.validate();
  bool mentions_schedule = false;
  for (const auto& f : findings) {
    if (f.find("decreasing") != std::string::npos) mentions_schedule = true;
  }
  CHECK(mentions_schedule);
}

TEST_CASE("run_experiment rejects an invalid config with ConfigError") {
  auto j = base_config("smooth-variation");
  j["kernel"]["rho"] = -0.2;
  j["h_schedule"] = {1e-2, 1e-3, 1e-4};
  const auto cfg = ExperimentConfig::from_json(j);
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("config json round-trips") {
  auto j = base_config("lemma35");
  j["delta_schedule"] = {1e-2, 1e-3, 1e-4};
  j["h0"] = 0.5;
  const auto cfg = ExperimentConfig::from_json(j);
  const auto cfg2 = ExperimentConfig::from_json(cfg.to_json());
  CHECK(cfg2.to_json() == cfg.to_json());
}

TEST_CASE("config file parse errors carry a line anchor") {
  const auto dir = std::filesystem::temp_directory_path() / "volterra_cfg";
  std::filesystem::create_directories(dir);
  const auto path = dir / "broken.json";
  std::ofstream(path) << "{\n  \"experiment\": \"theorem1\",\n  oops\n}\n";
  try {
    ExperimentConfig::from_json_file(path.string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("broken.json:3") != std::string::npos);
  }
}

TEST_CASE("smooth-variation experiment runs and reports pass") {
  auto j = base_config("smooth-variation");
  j["h_schedule"] = {1e-2, 1e-3, 1e-4, 1e-5};
  j["tol"] = 1e-12;
  j["out_dir"] = "exp_test_out/sv";
  const auto cfg = ExperimentConfig::from_json(j);
  const auto manifest = run_experiment(cfg);
  CHECK(manifest.pass);
  CHECK(std::filesystem::exists("exp_test_out/sv/smooth_variation.csv"));
  CHECK(std::filesystem::exists("exp_test_out/sv/manifest.json"));
}

TEST_CASE("by-parts-oracle experiment passes on a pure-jump driver") {
  auto j = base_config("by-parts-oracle");
  j["replicas"] = 3;
  j["grid_n"] = 20;
  j["out_dir"] = "exp_test_out/bp";
  const auto cfg = ExperimentConfig::from_json(j);
  const auto manifest = run_experiment(cfg);
  CHECK(manifest.pass);
}

TEST_CASE("theorem1 with a quiet driver reports zero limits") {
  auto j = base_config("theorem1");
  j["driver"]["jump_intensity"] = 0.0;
  j["h_schedule"] = {1e-2, 1e-3, 1e-4};
  j["replicas"] = 2;
  j["out_dir"] = "exp_test_out/t1quiet";
  const auto cfg = ExperimentConfig::from_json(j);
  const auto manifest = run_experiment(cfg);
  CHECK(manifest.pass);
  for (const auto& c : manifest.checks) {
    if (c.name == "jump_probe_max_rel_err") CHECK(c.measured == 0.0);
  }
}

TEST_CASE("experiment outputs are byte-identical across reruns") {
  auto j = base_config("by-parts-oracle");
  j["replicas"] = 2;
  j["grid_n"] = 10;
  for (const char* dir : {"exp_test_out/det_a", "exp_test_out/det_b"}) {
    j["out_dir"] = dir;
    const auto cfg = ExperimentConfig::from_json(j);
    run_experiment(cfg);
  }
  for (const char* name : {"byparts.csv", "decomposition.csv"}) {
    const auto a = read_file(std::filesystem::path("exp_test_out/det_a") / name);
    const auto b = read_file(std::filesystem::path("exp_test_out/det_b") / name);
    CHECK(!a.empty());
    CHECK(a == b);
  }
}
