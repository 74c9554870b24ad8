#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "doclab/bounds.hpp"
#include "doclab/config.hpp"
#include "doclab/doc_histogram.hpp"
#include "doclab/erm.hpp"

namespace doclab {

/// Per-epsilon comparison of the measured bad fraction against the DOC-side
/// ratio bound.
struct PhiCheck {
  double epsilon = 0.0;
  double phi_hat = 0.0;
  double phi_sigma = 0.0;    // binomial std of phi_hat
  double ratio_bound = 0.0;  // bad_fraction_ratio(doc, n, epsilon)
  bool within_bound = false; // phi_hat <= ratio_bound + 3 sigma
};

struct ReportPerN {
  int n = 0;
  std::int64_t successes = 0;
  std::int64_t exhausted = 0;
  double mean_test_error = 0.0;
  double mean_sigma = 0.0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
  double predicted_mean_error = 0.0;
  bool mean_within_bound = false;  // mean <= predicted + 3 sigma
  std::vector<PhiCheck> phi_checks;
};

struct CorrelationBlock {
  double epsilon = 0.0;
  CorrelationDiagnostic diagnostic;
};

/// Everything the run produced, in recomputable form: each number here can be
/// rebuilt from doc.json, trials.csv and volumes.csv.
struct Report {
  int schema_version = 1;
  std::string name;
  std::string config_echo_json;  // the parsed config, re-serialized

  // DOC summary
  std::string arch;
  std::string dataset_id;
  double e_min_estimate = 1.0;
  double e_min_value = 1.0;
  std::string e_min_policy;
  std::vector<std::pair<double, double>> g_table;  // (epsilon, g_epsilon)

  std::vector<ReportPerN> per_n;
  std::vector<CorrelationBlock> correlation;

  std::uint64_t seed = 0;
  std::string generator;
};

/// Builds the report from in-memory artifacts; pure function of its inputs.
Report build_report(const ExperimentConfig& config, std::uint64_t seed,
                    const DocHistogram& doc,
                    const std::vector<TrialRecord>& trials,
                    const std::vector<VolumePair>& volume_pairs);

std::string report_to_json(const Report& report);

/// Serializes the config in canonical key order (used for the report echo).
std::string config_to_json(const ExperimentConfig& config, std::uint64_t seed);

/// Plot-ready artifacts: box-plot series and empirical-vs-predicted series as
/// CSV, plus static SVG charts of the DOC histogram, the box plots, and the
/// comparison.
void emit_plot_data(const Report& report, const DocHistogram& doc,
                    const std::string& dir);

}  // namespace doclab
