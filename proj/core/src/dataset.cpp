#include "doclab/dataset.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace doclab {

void LabeledDataset::validate() const {
  if (inputs.cols() != static_cast<Eigen::Index>(labels.size()))
    throw std::invalid_argument("LabeledDataset: inputs/labels size mismatch");
  for (std::uint8_t l : labels)
    if (l > 1) throw std::invalid_argument("LabeledDataset: label outside {0,1}");
}

LabeledDataset gen_gaussian(const GaussianProblem& problem, std::int64_t n,
                            RngStream& rng) {
  if (n < 0) throw std::invalid_argument("gen_gaussian: n must be >= 0");
  LabeledDataset out;
  out.provenance = LabeledDataset::Provenance::kSyntheticGaussian;
  out.inputs.resize(problem.dim, n);
  out.labels.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const std::uint8_t label = rng.next_unit() < 0.5 ? 0 : 1;
    out.labels[static_cast<std::size_t>(i)] = label;
    const double mean0 = label == 0 ? problem.center_offset : -problem.center_offset;
    for (int d = 0; d < problem.dim; ++d) {
      const double mu = d == 0 ? mean0 : 0.0;
      out.inputs(d, i) = mu + problem.class_std * rng.next_normal();
    }
  }
  return out;
}

LabeledDataset gen_gaussian_balanced(const GaussianProblem& problem,
                                     std::int64_t n, RngStream& rng) {
  if (n < 0) throw std::invalid_argument("gen_gaussian_balanced: n must be >= 0");
  LabeledDataset out;
  out.provenance = LabeledDataset::Provenance::kSyntheticGaussian;
  out.inputs.resize(problem.dim, n);
  out.labels.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const std::uint8_t label = static_cast<std::uint8_t>(i % 2);
    out.labels[static_cast<std::size_t>(i)] = label;
    const double mean0 = label == 0 ? problem.center_offset : -problem.center_offset;
    for (int d = 0; d < problem.dim; ++d) {
      const double mu = d == 0 ? mean0 : 0.0;
      out.inputs(d, i) = mu + problem.class_std * rng.next_normal();
    }
  }
  return out;
}

double bayes_error_gaussian(const GaussianProblem& problem) {
  if (problem.class_std <= 0.0)
    throw std::invalid_argument("bayes_error_gaussian: class_std must be > 0");
  const double z = problem.center_offset / problem.class_std;
  // Phi(-z) without cancellation for large z.
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

LabeledDataset draw_training_set(const LabeledDataset& pool, std::int64_t n,
                                 RngStream& rng) {
  const std::int64_t pool_size = pool.size();
  if (n < 0 || n > pool_size)
    throw std::invalid_argument("draw_training_set: n exceeds pool size");
  std::vector<std::int64_t> index(static_cast<std::size_t>(pool_size));
  std::iota(index.begin(), index.end(), 0);
  // Partial Fisher-Yates: the first n slots end up a uniform sample.
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t j =
        i + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(pool_size - i)));
    std::swap(index[static_cast<std::size_t>(i)], index[static_cast<std::size_t>(j)]);
  }
  LabeledDataset out;
  out.provenance = pool.provenance;
  out.id = pool.id;
  out.inputs.resize(pool.dim(), n);
  out.labels.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    out.inputs.col(i) = pool.inputs.col(index[static_cast<std::size_t>(i)]);
    out.labels[static_cast<std::size_t>(i)] =
        pool.labels[static_cast<std::size_t>(index[static_cast<std::size_t>(i)])];
  }
  return out;
}

LabeledDataset with_random_labels(const LabeledDataset& data, RngStream& rng) {
  LabeledDataset out = data;
  for (auto& l : out.labels) l = rng.next_unit() < 0.5 ? 0 : 1;
  return out;
}

}  // namespace doclab
