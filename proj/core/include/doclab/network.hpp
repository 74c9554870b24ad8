#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "doclab/dataset.hpp"

namespace doclab {

/// Bias-free leaky-ReLU multi-layer perceptron. layer_widths runs from the
/// input dimension to the output width, which is always 2 (binary decision by
/// argmax). The activation is applied after every layer, output included.
struct Arch {
  std::vector<int> layer_widths;
  double leakiness = 0.1;

  int input_dim() const { return layer_widths.front(); }
  int layer_count() const { return static_cast<int>(layer_widths.size()) - 1; }
  void validate() const;  // throws std::invalid_argument
  std::string to_string() const;  // e.g. "10-10-2"
};

/// Flat weight vector: row-major layer matrices W_1..W_K concatenated
/// input-to-output. W_k has shape (layer_widths[k+1] x layer_widths[k]).
/// Sphere samples have unit norm; forward() itself accepts any scale.
using WeightVector = Eigen::VectorXd;

/// Total number of weights, sum over layers of out_width * in_width.
int weight_count(const Arch& arch);

/// y = f(W_K f(W_{K-1} ... f(W_1 x))), f the leaky ReLU.
Eigen::Vector2d forward(const Arch& arch, const WeightVector& w,
                        const Eigen::VectorXd& x);

/// Batched forward: X holds one sample per column (dim x count), the result
/// one output pair per column (2 x count).
Eigen::MatrixXd forward_batch(const Arch& arch, const WeightVector& w,
                              const Eigen::MatrixXd& X);

/// Argmax over the two outputs; exact ties resolve to class 0.
int predict(const Arch& arch, const WeightVector& w, const Eigen::VectorXd& x);

/// Number of misclassified samples. Accepts an empty dataset (returns 0),
/// which is what makes the n = 0 rejection step vacuous.
std::int64_t error_count(const Arch& arch, const WeightVector& w,
                         const LabeledDataset& data);

/// error_count == 0, but bails out of the batch at the first misclassified
/// chunk; this is the rejection-loop fast path.
bool zero_train_error(const Arch& arch, const WeightVector& w,
                      const LabeledDataset& data);

/// Fraction of misclassified samples, in {0, 1/n, ..., 1}. Serves as the
/// training error on a training set and as the true-error estimate on a
/// held-out test set. The dataset must be non-empty.
double empirical_error(const Arch& arch, const WeightVector& w,
                       const LabeledDataset& data);

}  // namespace doclab
