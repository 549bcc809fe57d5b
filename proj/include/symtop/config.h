#ifndef SYMTOP_CONFIG_H_
#define SYMTOP_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "symtop/coupling.h"
#include "symtop/spectrum.h"

namespace symtop {

inline constexpr int kConfigSchema = 1;

/// Parse or validation failure, located by line and field where possible.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line, std::string field);
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct Tolerances {
  double rank = 1e-8;
  double closure = 1e-9;
  double unitarity = 1e-9;
};

/// Task-specific knobs, all optional in the file.
struct TaskParams {
  int j = 1;
  int k = 1;
  int m = 1;
  int max_block = 1;
  bool allow_large_blocks = false;
  int samples = 1000;
  int depth = 3;
  double horizon = 10.0;
  double step = 1e-3;
  double u_max = 1.0;
  int segments = 10;
  double eps = 0.1;
  int phases = 16;
  int steps_per_period = 40;
};

struct ExperimentConfig {
  std::string task;
  Inertia inertia;
  Dipole dipole;
  int j_max = 2;
  Tolerances tolerances;
  std::uint64_t seed = 1;
  std::string output = "out";
  TaskParams params;

  /// Fully expanded form, used for the report and its hash.
  nlohmann::json to_json() const;
  std::string hash() const;
};

bool is_known_task(const std::string& task);

/// Throws ConfigError. `source` names the document in messages.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace symtop

#endif  // SYMTOP_CONFIG_H_
