#include <doctest.h>

#include <algorithm>
#include <string>

#include "doclab/config.hpp"

using doclab::ConfigValidation;
using doclab::ExperimentConfig;

namespace {

bool has_violation(const ConfigValidation& v, const std::string& needle) {
  return std::any_of(v.violations.begin(), v.violations.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

const char* kGaussianConfig = R"(
# the published synthetic protocol
name = gaussian-small
problem.kind = gaussian
problem.dim = 10
problem.center_offset = 1.0
problem.class_std = 0.5
problem.test_samples = 10000

arch.layer_widths = 10, 10, 2
arch.leakiness = 0.1

doc.samples = 1000000
doc.bins = 100

qn.n_values = 2, 6, 10, 14, 18, 22, 26, 30
qn.trials_per_n = 1000
qn.max_trials_each = 10000000

volumes.training_sets = 200
volumes.probes = 100000
volumes.n = 10
volumes.epsilons = 0.2

bounds.epsilons = 0.1, 0.2
bounds.a_values = 2
bounds.gammas = 0.1

seed = 20240801
workers = 0
)";

}  // namespace

TEST_CASE("a faithful gaussian config validates cleanly") {
  const ConfigValidation v = doclab::validate_config_text(kGaussianConfig);
  REQUIRE(v.ok());
  const ExperimentConfig& c = *v.config;
  CHECK(c.name == "gaussian-small");
  CHECK(c.kind == ExperimentConfig::ProblemKind::kGaussian);
  CHECK(c.gaussian.dim == 10);
  CHECK(c.gaussian.class_std == 0.5);
  CHECK(c.arch.layer_widths == std::vector<int>{10, 10, 2});
  CHECK(c.doc.samples == 1000000);
  CHECK(c.qn.n_values == std::vector<int>{2, 6, 10, 14, 18, 22, 26, 30});
  CHECK(c.qn.trials_per_n == 1000);
  CHECK(c.volumes.training_sets == 200);
  CHECK(c.volumes.probes == 100000);
  CHECK(c.bounds.epsilons == std::vector<double>{0.1, 0.2});
  CHECK(c.seed == 20240801);
}

TEST_CASE("zero trials per n is rejected") {
  std::string text = kGaussianConfig;
  text.replace(text.find("qn.trials_per_n = 1000"), 22, "qn.trials_per_n = 0   ");
  const ConfigValidation v = doclab::validate_config_text(text);
  CHECK_FALSE(v.ok());
  CHECK(has_violation(v, "qn.trials_per_n"));
  CHECK(has_violation(v, ">= 1"));
}

TEST_CASE("missing mnist files are reported by key") {
  const char* text = R"(
name = mnist-lin
problem.kind = mnist
problem.train_images = /nonexistent/train-images
problem.train_labels = /nonexistent/train-labels
problem.test_images = /nonexistent/test-images
problem.test_labels = /nonexistent/test-labels
arch.layer_widths = 784, 2
qn.n_values = 4, 8
)";
  const ConfigValidation v = doclab::validate_config_text(text);
  CHECK_FALSE(v.ok());
  CHECK(has_violation(v, "problem.train_images"));
  CHECK(has_violation(v, "file not found"));
}

TEST_CASE("all violations are reported, not only the first") {
  const char* text = R"(
name = broken
problem.kind = gaussian
arch.layer_widths = 10, 3
qn.n_values = 5, 2
qn.trials_per_n = 0
doc.bins = 1
)";
  const ConfigValidation v = doclab::validate_config_text(text);
  CHECK_FALSE(v.ok());
  CHECK(v.violations.size() >= 4);
  CHECK(has_violation(v, "arch.layer_widths"));
  CHECK(has_violation(v, "ascending"));
  CHECK(has_violation(v, "qn.trials_per_n"));
  CHECK(has_violation(v, "doc.bins"));
}

TEST_CASE("syntax problems carry the line number") {
  const char* text = "name = x\narch.layer_widths = 10, 2\nqn.n_values = 1\nthis line has no equals\n";
  const ConfigValidation v = doclab::validate_config_text(text, "test.cfg");
  CHECK_FALSE(v.ok());
  CHECK(has_violation(v, "test.cfg:4"));
}

TEST_CASE("duplicate and unknown keys are flagged") {
  const char* text = R"(
name = x
name = y
arch.layer_widths = 10, 2
qn.n_values = 1
qn.trails_per_n = 100
)";
  const ConfigValidation v = doclab::validate_config_text(text);
  CHECK_FALSE(v.ok());
  CHECK(has_violation(v, "duplicate key `name`"));
  CHECK(has_violation(v, "unknown key `qn.trails_per_n`"));
}

TEST_CASE("arch input width must match the problem dimension") {
  std::string text = kGaussianConfig;
  text.replace(text.find("problem.dim = 10"), 16, "problem.dim = 12");
  const ConfigValidation v = doclab::validate_config_text(text);
  CHECK_FALSE(v.ok());
  CHECK(has_violation(v, "input width"));
}

TEST_CASE("unreadable path is a violation, not a crash") {
  const ConfigValidation v = doclab::validate_config("/nonexistent/config.cfg");
  CHECK_FALSE(v.ok());
  CHECK(has_violation(v, "cannot open"));
}
