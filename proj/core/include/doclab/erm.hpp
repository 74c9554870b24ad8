#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "doclab/dataset.hpp"
#include "doclab/network.hpp"
#include "doclab/rng.hpp"

namespace doclab {

/// Outcome of one rejection-sampling trial: one fresh training set, sphere
/// samples drawn until one classified it perfectly (or the budget ran out),
/// then that solution's error on the fixed test set.
struct TrialRecord {
  std::int64_t trial_id = 0;
  int n = 0;
  std::uint64_t train_stream = 0;   // stream id that produced the training set
  std::int64_t trials_to_hit = 0;   // weight draws used; == budget when exhausted
  double test_error = 0.0;          // NaN when exhausted
  bool exhausted = false;
  std::int64_t wall_time_ms = 0;    // measured; lives outside deterministic artifacts
};

struct FindResult {
  std::optional<WeightVector> weights;  // empty when the budget was exhausted
  std::int64_t trials = 0;
};

/// Draw sphere samples until one has zero training error. Returns the first
/// hit and the number of draws used. Exhaustion is a reported outcome, not an
/// error: it is what the over-parameterization assumption failing looks like.
FindResult find_zero_train_solution(const Arch& arch, const LabeledDataset& train,
                                    RngStream& rng, std::int64_t max_trials);

/// Supplies one fresh training set per trial.
class TrainingSetSource {
 public:
  virtual ~TrainingSetSource() = default;
  virtual LabeledDataset draw(std::int64_t n, RngStream& rng) const = 0;
  virtual std::string id() const = 0;
};

/// I.i.d. draws from the two-Gaussian problem; optionally replaces labels
/// with fair coin flips (the random-label problem).
class GaussianSource final : public TrainingSetSource {
 public:
  explicit GaussianSource(GaussianProblem problem, bool random_labels = false)
      : problem_(problem), random_labels_(random_labels) {}
  LabeledDataset draw(std::int64_t n, RngStream& rng) const override;
  std::string id() const override;

 private:
  GaussianProblem problem_;
  bool random_labels_;
};

/// Uniform draws without replacement from a fixed pool (the MNIST path).
class PoolSource final : public TrainingSetSource {
 public:
  explicit PoolSource(const LabeledDataset& pool) : pool_(&pool) {}
  LabeledDataset draw(std::int64_t n, RngStream& rng) const override;
  std::string id() const override { return pool_->id; }

 private:
  const LabeledDataset* pool_;
};

/// The per-n experiment: `trials` independent trials, each with its own
/// training-set stream (kQnTrain, n, trial) and weight stream
/// (kQnWeight, n, trial), so the result is identical for any worker count.
/// Exhausted trials are recorded, not dropped.
std::vector<TrialRecord> sample_qn(const Arch& arch, const TrainingSetSource& source,
                                   const LabeledDataset& test, int n,
                                   std::int64_t trials, std::int64_t max_trials_each,
                                   std::uint64_t seed, int workers = 0);

struct QnSummary {
  int n = 0;
  std::int64_t successes = 0;
  std::int64_t exhausted = 0;
  double mean = 0.0;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
  double mean_sigma = 0.0;  // bootstrap std of the mean test error
  std::vector<std::pair<double, double>> phi_hat;  // (epsilon, fraction bad)
};

/// Summary statistics over the successful records: mean test error (the
/// empirical E_n), box-plot quartiles, and phi_hat(eps) = fraction of
/// solutions with test error >= e_min + eps. Throws when every trial
/// exhausted.
QnSummary summarize_qn(std::span<const TrialRecord> records, double e_min,
                       std::span<const double> epsilons, std::uint64_t seed);

/// Probe-pass estimate of the solution-volume pair for one training set:
/// omega_hat = fraction of probe weights with zero training error,
/// omega_eps_hat = fraction that additionally have test error >= e_min + eps.
struct VolumePair {
  std::int64_t set_index = 0;
  std::uint64_t train_stream = 0;
  int n = 0;
  std::int64_t probes = 0;
  double omega_hat = 0.0;
  double omega_eps_hat = 0.0;
  double epsilon = 0.0;
};

VolumePair estimate_volume_pair(const Arch& arch, const LabeledDataset& train,
                                const LabeledDataset& test, std::int64_t probes,
                                double epsilon, double e_min, RngStream& rng);

/// Same probe pass evaluated for several epsilons at once (the test error of
/// an accepted probe is measured once and thresholded per epsilon). The
/// single-epsilon form is the one-element special case.
std::vector<VolumePair> estimate_volume_pairs(const Arch& arch,
                                              const LabeledDataset& train,
                                              const LabeledDataset& test,
                                              std::int64_t probes,
                                              std::span<const double> epsilons,
                                              double e_min, RngStream& rng);

/// Volume pairs over `training_sets` fresh training sets at size n; one
/// stream pair per set index, deterministic for any worker count.
std::vector<VolumePair> sample_volume_pairs(const Arch& arch,
                                            const TrainingSetSource& source,
                                            const LabeledDataset& test, int n,
                                            std::int64_t training_sets,
                                            std::int64_t probes,
                                            std::span<const double> epsilons,
                                            double e_min, std::uint64_t seed,
                                            int workers = 0);

/// Correlation structure of (phi_hat, omega_hat) across training sets.
/// mean_of_ratios averages phi_hat over the pairs where it is defined
/// (omega_hat > 0); ratio_of_means divides the means taken over all pairs.
/// diff_sigma is the bootstrap std of (mean_of_ratios - ratio_of_means).
struct CorrelationDiagnostic {
  std::int64_t pair_count = 0;
  std::int64_t usable_pairs = 0;  // omega_hat > 0
  double covariance = 0.0;
  double covariance_ci_lo = 0.0;
  double covariance_ci_hi = 0.0;
  double mean_of_ratios = 0.0;
  double ratio_of_means = 0.0;
  double diff_sigma = 0.0;
  bool inequality_within_ci = false;  // mean_of_ratios <= ratio_of_means + 2 sigma
};

/// stream_tag separates the bootstrap streams of independent diagnostics run
/// under one seed (one per epsilon, in practice).
CorrelationDiagnostic correlation_diagnostic(std::span<const VolumePair> pairs,
                                             std::uint64_t seed,
                                             std::uint64_t stream_tag = 1);

// CSV serialization (stable column order; readers accept exactly what the
// writers emit). Trial wall times are written as 0 to keep artifacts a pure
// function of (config, seed); measured times go to the timings sidecar.
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records);
std::vector<TrialRecord> read_trials_csv(std::istream& in);
void write_timings_csv(std::ostream& out, std::span<const TrialRecord> records);
void write_volumes_csv(std::ostream& out, std::span<const VolumePair> pairs);
std::vector<VolumePair> read_volumes_csv(std::istream& in);

}  // namespace doclab
