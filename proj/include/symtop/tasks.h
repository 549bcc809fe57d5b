#ifndef SYMTOP_TASKS_H_
#define SYMTOP_TASKS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "symtop/config.h"

namespace symtop {

struct TaskOutput {
  nlohmann::json report;
  std::vector<std::filesystem::path> files;
};

/// Runs cfg.task and writes <out_dir>/<task>.json plus any CSV traces.
/// Scientific verdicts are in the report; execution errors throw.
TaskOutput run_task(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, unsigned threads = 1);

/// Envelope shared by every report: task, version, config hash, seed and tolerances.
nlohmann::json report_header(const ExperimentConfig& cfg);

}  // namespace symtop

#endif  // SYMTOP_TASKS_H_
