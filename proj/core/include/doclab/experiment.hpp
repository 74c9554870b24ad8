#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "doclab/config.hpp"
#include "doclab/erm.hpp"

namespace doclab {

/// The experiment's data side, fully derived from (config, seed): the
/// training-set source, the fixed test set, and the analytic minimum error
/// when one exists (Gaussian problems; random labels pin it to 1/2).
struct Problem {
  std::unique_ptr<TrainingSetSource> source;
  std::unique_ptr<LabeledDataset> pool;  // owns the MNIST pool behind source
  LabeledDataset test;
  std::optional<double> analytic_e_min;
};

Problem build_problem(const ExperimentConfig& config, std::uint64_t seed);

struct RunOptions {
  std::string out_dir = "runs";
  std::optional<std::uint64_t> seed;  // overrides config.seed
  std::optional<int> workers;         // overrides config.workers
  std::string stage;                  // empty = all stages, else one of
                                      // doc | qn | volumes | bounds | report
};

/// Artifact layout: one directory per (experiment, seed), one file per
/// product. stage.json and timings.csv are operational sidecars (they carry
/// wall-clock data) and are not part of the reproducible artifact set.
struct RunPaths {
  std::filesystem::path dir;

  std::filesystem::path doc_json() const { return dir / "doc.json"; }
  std::filesystem::path doc_csv() const { return dir / "doc.csv"; }
  std::filesystem::path trials_csv() const { return dir / "trials.csv"; }
  std::filesystem::path volumes_csv() const { return dir / "volumes.csv"; }
  std::filesystem::path bounds_csv() const { return dir / "bounds.csv"; }
  std::filesystem::path report_json() const { return dir / "report.json"; }
  std::filesystem::path boxplot_csv() const { return dir / "boxplot.csv"; }
  std::filesystem::path comparison_csv() const { return dir / "comparison.csv"; }
  std::filesystem::path doc_svg() const { return dir / "doc.svg"; }
  std::filesystem::path boxplot_svg() const { return dir / "boxplot.svg"; }
  std::filesystem::path comparison_svg() const { return dir / "comparison.svg"; }
  std::filesystem::path stage_json() const { return dir / "stage.json"; }
  std::filesystem::path timings_csv() const { return dir / "timings.csv"; }

  static RunPaths for_run(const std::string& out_dir, const std::string& name,
                          std::uint64_t seed);
};

/// Executes the pipeline (or one stage of it) and writes artifacts under
/// options.out_dir. Stages read their inputs from earlier artifacts when run
/// in isolation. Returns 0 on success, 2 when a stage failed; failures leave
/// completed artifacts in place and mark the failing stage in stage.json.
int run_experiment(const ExperimentConfig& config, const RunOptions& options);

}  // namespace doclab
