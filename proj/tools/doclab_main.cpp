// doclab: measure the density of classifiers of small leaky-ReLU networks by
// uniform sphere sampling, rejection-sample zero-training-error solutions,
// and compare the measured error statistics against the DOC-derived
// predictions and decay bounds.
//
// Exit codes: 0 success, 1 config validation failure, 2 stage failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "doclab/config.hpp"
#include "doclab/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "runs";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config file")
      ->required();
  cmd->add_option("--out-dir", args.out_dir, "artifact directory root");
  // CLI11 writes through the optional only when the flag is present.
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--workers", args.workers,
                  "override worker count (0 = hardware)");
}

int run_with_stage(const CommonArgs& args, const std::string& stage) {
  const doclab::ConfigValidation validation =
      doclab::validate_config(args.config_path);
  if (!validation.ok()) {
    for (const std::string& v : validation.violations)
      std::cerr << "doclab: " << v << "\n";
    return 1;
  }
  doclab::RunOptions options;
  options.out_dir = args.out_dir;
  options.seed = args.seed;
  options.workers = args.workers;
  options.stage = stage;
  return doclab::run_experiment(*validation.config, options);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doclab: density-of-classifiers measurements for leaky-ReLU nets"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string run_stage;

  CLI::App* run = app.add_subcommand("run", "full pipeline (all stages)");
  add_common(run, args);
  run->add_option("--stage", run_stage,
                  "run only this stage (doc|qn|volumes|bounds|report)");

  CLI::App* validate =
      app.add_subcommand("validate", "check a config file and exit");
  add_common(validate, args);

  const char* stage_help[] = {
      "estimate the DOC histogram",
      "rejection-sample zero-training-error solutions per n",
      "probe solution volumes over fresh training sets",
      "evaluate decay bounds and predictions over the DOC",
      "re-render report.json and plot files from stored artifacts",
  };
  const std::string stage_names[] = {"doc", "qn", "volumes", "bounds", "report"};
  for (int i = 0; i < 5; ++i)
    add_common(app.add_subcommand(stage_names[i], stage_help[i]), args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_with_stage(args, run_stage);
    if (validate->parsed()) {
      const doclab::ConfigValidation validation =
          doclab::validate_config(args.config_path);
      if (!validation.ok()) {
        for (const std::string& v : validation.violations)
          std::cerr << "doclab: " << v << "\n";
        return 1;
      }
      std::cout << "config ok: " << validation.config->name << "\n";
      return 0;
    }
    for (const std::string& stage : stage_names)
      if (app.get_subcommand(stage)->parsed()) return run_with_stage(args, stage);
  } catch (const std::exception& e) {
    std::cerr << "doclab: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
