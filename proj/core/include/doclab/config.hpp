#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "doclab/dataset.hpp"
#include "doclab/network.hpp"

namespace doclab {

/// Full description of one experiment. Parsed from a flat `key = value` file
/// with dotted keys (see docs/ and tests/configs for the schema).
struct ExperimentConfig {
  enum class ProblemKind { kGaussian, kMnist };

  std::string name;

  ProblemKind kind = ProblemKind::kGaussian;
  GaussianProblem gaussian;
  bool random_labels = false;        // gaussian only: coin-flip labels
  std::int64_t test_samples = 10000; // gaussian only: fixed test-set size

  struct Mnist {
    std::string train_images, train_labels, test_images, test_labels;
    int class_a = 1, class_b = 2;
    std::int64_t train_per_class = 6000, test_per_class = 900;
  } mnist;

  Arch arch;

  struct Doc {
    std::int64_t samples = 100000;
    int bins = 100;
  } doc;

  struct Qn {
    std::vector<int> n_values;
    std::int64_t trials_per_n = 1000;
    std::int64_t max_trials_each = 10000000;
  } qn;

  struct Volumes {
    std::int64_t training_sets = 0;  // 0 disables the stage
    std::int64_t probes = 100000;
    int n = 10;
    std::vector<double> epsilons;
  } volumes;

  struct Bounds {
    std::vector<double> epsilons{0.1, 0.2};
    std::vector<double> a_values{2.0};
    std::vector<double> gammas{0.1};
  } bounds;

  std::uint64_t seed = 1;
  int workers = 0;  // 0 = hardware concurrency
};

/// Either a config or the full list of violations; parsing and semantic
/// validation both report every problem they can find, not just the first.
struct ConfigValidation {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> violations;
  bool ok() const { return config.has_value() && violations.empty(); }
};

ConfigValidation validate_config(const std::string& path);
ConfigValidation validate_config_text(const std::string& text,
                                      const std::string& origin = "<string>");

}  // namespace doclab
