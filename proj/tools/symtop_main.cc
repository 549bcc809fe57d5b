#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "symtop/acceptance.h"
#include "symtop/config.h"
#include "symtop/parallel.h"
#include "symtop/report_io.h"
#include "symtop/tasks.h"

namespace {

constexpr int kExecutionError = 1;
constexpr int kUsageError = 2;

struct TaskArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = 0;
};

int run_config_task(const std::string& task, const TaskArgs& args) {
  symtop::ExperimentConfig cfg;
  try {
    cfg = symtop::load_config(args.config);
  } catch (const symtop::ConfigError& e) {
    std::cerr << "symtop: " << e.what() << "\n";
    return kUsageError;
  }
  if (cfg.task != task) {
    std::cerr << "symtop: config task '" << cfg.task << "' does not match command '" << task << "'\n";
    return kUsageError;
  }
  if (args.seed) cfg.seed = *args.seed;
  const std::filesystem::path out = args.out.empty() ? cfg.output : args.out;
  try {
    const auto result = symtop::run_task(cfg, out, args.threads == 0 ? symtop::thread_cap() : args.threads);
    for (const auto& f : result.files) std::cout << f.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "symtop: " << task << " failed: " << e.what() << "\n";
    return kExecutionError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controllability verification toolkit for symmetric-top molecules"};
  app.set_version_flag("--version", symtop::kToolkitVersion);
  app.require_subcommand(1);

  const char* tasks[] = {"verify-quantum", "verify-classical", "simulate",
                         "restricted-sk",  "three-wave",       "resonance-report"};
  TaskArgs args;
  for (const char* name : tasks) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " task");
    sub->add_option("--config", args.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", args.seed, "override the config seed");
    sub->add_option("--out", args.out, "output directory (default: config output)");
    sub->add_option("--threads", args.threads, "worker threads (default: SYMTOP_THREADS or all cores)");
  }

  std::string suite_name = "fast";
  std::string reproduce_out;
  unsigned reproduce_threads = 0;
  std::uint64_t reproduce_seed = 1;
  auto* reproduce = app.add_subcommand("reproduce", "run the acceptance suite");
  reproduce->add_option("--suite", suite_name, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  reproduce->add_option("--out", reproduce_out, "directory for acceptance.json");
  reproduce->add_option("--threads", reproduce_threads, "worker threads");
  reproduce->add_option("--seed", reproduce_seed, "seed for randomised criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  if (reproduce->parsed()) {
    symtop::AcceptanceOptions opt;
    opt.suite = *symtop::parse_suite(suite_name);
    opt.threads = reproduce_threads == 0 ? symtop::thread_cap() : reproduce_threads;
    opt.seed = reproduce_seed;
    opt.progress = &std::cout;
    try {
      const auto results = symtop::run_acceptance(opt);
      std::cout << (symtop::all_passed(results) ? "all criteria passed" : "some criteria failed") << "\n";
      if (!reproduce_out.empty()) {
        nlohmann::json report = {{"suite", symtop::to_string(opt.suite)},
                                 {"toolkit_version", symtop::kToolkitVersion},
                                 {"seed", opt.seed},
                                 {"criteria", symtop::to_json(results)}};
        symtop::write_text(std::filesystem::path(reproduce_out) / "acceptance.json", symtop::dump_json(report));
      }
    } catch (const std::exception& e) {
      std::cerr << "symtop: reproduce failed: " << e.what() << "\n";
      return kExecutionError;
    }
    return 0;
  }
  for (const auto* sub : app.get_subcommands()) return run_config_task(sub->get_name(), args);
  return kUsageError;
}
