#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "symtop/config.h"
#include "symtop/report_io.h"
#include "symtop/tasks.h"

using namespace symtop;
namespace fs = std::filesystem;

namespace {

const std::string kMinimal = R"({
  "schema": 1,
  "task": "three-wave",
  "inertia": {"I2": 1.0, "I3": 0.7071067811865476},
  "dipole": {"d1": 0.0, "d2": 0.2, "d3": 0.3}
})";

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("symtop_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SYMTOP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig config_file(const std::string& name) {
  return load_config(fs::path(SYMTOP_CONFIG_DIR) / name);
}

}  // namespace

TEST(Config, DefaultsAndExpansion) {
  const auto cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.task, "three-wave");
  EXPECT_EQ(cfg.j_max, 2);
  EXPECT_EQ(cfg.seed, 1u);
  EXPECT_DOUBLE_EQ(cfg.tolerances.rank, 1e-8);
  EXPECT_EQ(cfg.dipole.classify(), DipoleClass::kGenericAccidental);
  EXPECT_EQ(parse_config(dump_json(cfg.to_json())).to_json(), cfg.to_json());
}

TEST(Config, DiagnosticsNameLineAndField) {
  const std::string bad_key = "{\n  \"schema\": 1,\n  \"task\": \"simulate\",\n  \"inertia\": {\"I2\": 1, \"I3\": 2},\n"
                              "  \"dipole\": {\"d3\": 1},\n  \"params\": {\"horizon\": 1, \"colour\": 3}\n}";
  try {
    parse_config(bad_key, "bad.json");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 6);
    EXPECT_EQ(e.field(), "params.colour");
    EXPECT_NE(std::string(e.what()).find("bad.json:6: field 'params.colour': unknown key"), std::string::npos);
  }
  const std::string negative = "{\n  \"schema\": 1,\n  \"task\": \"simulate\",\n  \"inertia\": {\n    \"I2\": -1,\n"
                               "    \"I3\": 2\n  },\n  \"dipole\": {\"d3\": 1}\n}";
  try {
    parse_config(negative);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 5);
    EXPECT_EQ(e.field(), "inertia.I2");
  }
  try {
    parse_config("{\n  \"schema\": 1,\n  \"task\": \n}");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(Config, Rejections) {
  const auto with = [](const std::string& extra) {
    return "{\"schema\": 1, \"task\": \"simulate\", \"inertia\": {\"I2\": 1, \"I3\": 2}, \"dipole\": {\"d3\": 1}" +
           extra + "}";
  };
  EXPECT_NO_THROW(parse_config(with("")));
  EXPECT_THROW(parse_config(with(", \"J_max\": 0")), ConfigError);
  EXPECT_THROW(parse_config(with(", \"J_max\": 2.5")), ConfigError);
  EXPECT_THROW(parse_config(with(", \"tolerances\": {\"rank\": 2}")), ConfigError);
  EXPECT_THROW(parse_config(with(", \"params\": {\"depth\": 1}")), ConfigError);
  EXPECT_THROW(parse_config(with(", \"extra\": true")), ConfigError);
  EXPECT_THROW(parse_config("{\"schema\": 2, \"task\": \"simulate\"}"), ConfigError);
  EXPECT_THROW(parse_config("{\"schema\": 1, \"task\": \"reproduce\", \"inertia\": {\"I2\": 1, \"I3\": 2}, "
                            "\"dipole\": {\"d3\": 1}}"),
               ConfigError);
  EXPECT_THROW(parse_config("{\"schema\": 1, \"task\": \"simulate\", \"inertia\": {\"I2\": 1, \"I3\": 2}, "
                            "\"dipole\": {\"d1\": 0}}"),
               ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, HashIgnoresOutputOnly) {
  auto a = parse_config(kMinimal);
  auto b = a;
  b.output = "elsewhere";
  EXPECT_EQ(a.hash(), b.hash());
  b.seed = 2;
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
}

TEST(Tasks, ExampleConfigsRun) {
  for (const auto* name : {"verify_quantum_genuine.json", "verify_quantum_orthogonal.json", "simulate.json",
                           "restricted_s0.json", "three_wave.json", "resonance_report.json"}) {
    const auto cfg = config_file(name);
    const auto dir = scratch(cfg.task);
    const auto out = run_task(cfg, dir, 2);
    ASSERT_FALSE(out.files.empty()) << name;
    EXPECT_TRUE(fs::exists(dir / (cfg.task + ".json"))) << name;
    const auto report = nlohmann::json::parse(slurp(out.files.front()));
    EXPECT_EQ(report["task"], cfg.task);
    EXPECT_EQ(report["config_hash"], cfg.hash());
    EXPECT_EQ(report["toolkit_version"], kToolkitVersion);
    EXPECT_TRUE(report.contains("result")) << name;
  }
}

TEST(Tasks, VerdictsInReports) {
  const auto dir = scratch("verdicts");
  EXPECT_EQ(run_task(config_file("verify_quantum_genuine.json"), dir).report["result"]["verdict"],
            "SymmetryBlocked: k-invariance");
  EXPECT_EQ(run_task(config_file("verify_quantum_orthogonal.json"), dir).report["result"]["verdict"],
            "SymmetryBlocked: parity");
  EXPECT_EQ(run_task(config_file("restricted_s0.json"), dir).report["result"]["verdict"], "MTracker on S_k");
  auto quick = config_file("verify_quantum_reference.json");
  quick.j_max = 1;
  EXPECT_EQ(run_task(quick, dir).report["result"]["verdict"], "MTracker");
  auto classical = config_file("verify_classical_accidental.json");
  classical.params.samples = 50;
  classical.params.horizon = 1.0;
  const auto rep = run_task(classical, dir).report["result"];
  EXPECT_EQ(rep["summary"], "rank 6 at 50/50 sampled generic states");
  EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));
}

TEST(Tasks, ByteIdenticalReports) {
  auto cfg = config_file("verify_classical_genuine.json");
  cfg.params.samples = 40;
  cfg.params.horizon = 1.0;
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  run_task(cfg, a, 1);
  run_task(cfg, b, 4);
  EXPECT_EQ(slurp(a / "verify-classical.json"), slurp(b / "verify-classical.json"));
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
  const auto sim = config_file("simulate.json");
  run_task(sim, a);
  run_task(sim, b);
  EXPECT_EQ(slurp(a / "simulate.json"), slurp(b / "simulate.json"));
  EXPECT_EQ(slurp(a / "populations.csv"), slurp(b / "populations.csv"));
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  const std::string cfg = std::string(SYMTOP_CONFIG_DIR) + "/three_wave.json";
  EXPECT_EQ(run_cli("three-wave --config " + cfg + " --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "three-wave.json"));
  EXPECT_TRUE(fs::exists(dir / "three_wave_trace.csv"));
  EXPECT_EQ(run_cli("simulate --config " + cfg + " --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("three-wave --config /nonexistent.json"), 2);
  EXPECT_EQ(run_cli("no-such-command"), 2);
  EXPECT_EQ(run_cli(""), 2);
  std::ofstream(dir / "broken.json") << "{\n  \"schema\": 1,\n  \"task\": \"three-wave\",\n  \"bogus\": 1\n}\n";
  EXPECT_EQ(run_cli("three-wave --config " + (dir / "broken.json").string()), 2);
  // k = 0 passes validation but the demo refuses it: an execution error.
  std::ofstream(dir / "k0.json") << R"({"schema": 1, "task": "three-wave", "inertia": {"I2": 1, "I3": 0.7},
    "dipole": {"d3": 1}, "params": {"k": 0}})";
  EXPECT_EQ(run_cli("three-wave --config " + (dir / "k0.json").string() + " --out " + dir.string()), 1);
  EXPECT_EQ(run_cli("--version"), 0);
}
