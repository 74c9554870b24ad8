#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "doclab/rng.hpp"

namespace doclab {

/// Binary-labeled dataset. Inputs are stored one sample per column so a whole
/// set can be pushed through a network as a single matrix product.
struct LabeledDataset {
  enum class Provenance { kSyntheticGaussian, kMnistSubset, kCrafted };

  Eigen::MatrixXd inputs;             // dim x count
  std::vector<std::uint8_t> labels;   // values in {0, 1}
  Provenance provenance = Provenance::kCrafted;
  std::string id;                     // source tag carried into reports

  Eigen::Index size() const { return inputs.cols(); }
  Eigen::Index dim() const { return inputs.rows(); }
  void validate() const;  // throws std::invalid_argument on broken invariants
};

/// Two isotropic Gaussians in `dim` dimensions: class 0 centered at
/// (+center_offset, 0, ..., 0), class 1 at (-center_offset, 0, ..., 0), both
/// with covariance class_std^2 * I and equal prior.
struct GaussianProblem {
  int dim = 10;
  double center_offset = 1.0;
  double class_std = 0.5;
};

/// n i.i.d. samples: label ~ Bernoulli(1/2), then input ~ N(mean_label,
/// class_std^2 I). Labels are not balanced by construction, so small-n
/// same-class sets occur at their natural rate.
LabeledDataset gen_gaussian(const GaussianProblem& problem, std::int64_t n,
                            RngStream& rng);

/// Exactly balanced variant for held-out test sets: labels alternate 0,1 and
/// only the inputs are random. Odd n gives class 0 one extra sample.
LabeledDataset gen_gaussian_balanced(const GaussianProblem& problem,
                                     std::int64_t n, RngStream& rng);

/// Minimal possible classification error of the problem: Phi(-offset/std),
/// attained by the hyperplane x_1 = 0.
double bayes_error_gaussian(const GaussianProblem& problem);

/// n samples drawn uniformly without replacement from the pool.
LabeledDataset draw_training_set(const LabeledDataset& pool, std::int64_t n,
                                 RngStream& rng);

/// Copy of `data` with every label replaced by an independent fair coin flip.
LabeledDataset with_random_labels(const LabeledDataset& data, RngStream& rng);

}  // namespace doclab
