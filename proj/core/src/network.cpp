#include "doclab/network.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace doclab {

namespace {

using RowMajorMap = Eigen::Map<
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Layer matrices materialized column-major: the copies are tiny and keep the
// batched products on Eigen's fast path.
std::vector<Eigen::MatrixXd> layer_matrices(const Arch& arch, const WeightVector& w) {
  std::vector<Eigen::MatrixXd> layers;
  layers.reserve(static_cast<std::size_t>(arch.layer_count()));
  std::ptrdiff_t offset = 0;
  for (int k = 0; k < arch.layer_count(); ++k) {
    const int in = arch.layer_widths[static_cast<std::size_t>(k)];
    const int out = arch.layer_widths[static_cast<std::size_t>(k) + 1];
    layers.emplace_back(RowMajorMap(w.data() + offset, out, in));
    offset += static_cast<std::ptrdiff_t>(in) * out;
  }
  return layers;
}

void check_shapes(const Arch& arch, const WeightVector& w, Eigen::Index input_rows) {
  arch.validate();
  if (input_rows != arch.input_dim())
    throw std::invalid_argument("forward: input dimension mismatch");
  if (w.size() != weight_count(arch))
    throw std::invalid_argument("forward: weight vector length mismatch");
}

template <typename Block>
inline void leaky_relu(Block block, double leakiness) {
  block = block.array().max(0.0) + leakiness * block.array().min(0.0);
}

// Shared batched evaluation over sample chunks; when stop_early is set it
// returns as soon as any chunk contains a misclassification.
std::int64_t count_errors(const Arch& arch, const WeightVector& w,
                          const LabeledDataset& data, bool stop_early) {
  check_shapes(arch, w, data.dim());
  const Eigen::Index total = data.size();
  if (total == 0) return 0;

  const auto layers = layer_matrices(arch, w);
  const int max_width =
      *std::max_element(arch.layer_widths.begin(), arch.layer_widths.end());
  constexpr Eigen::Index kChunk = 512;
  const Eigen::Index cols = std::min<Eigen::Index>(kChunk, total);
  Eigen::MatrixXd a(max_width, cols), b(max_width, cols);

  std::int64_t errors = 0;
  for (Eigen::Index start = 0; start < total; start += kChunk) {
    const Eigen::Index c = std::min<Eigen::Index>(kChunk, total - start);
    Eigen::Index width = arch.input_dim();
    a.topRows(width).leftCols(c) = data.inputs.middleCols(start, c);
    Eigen::MatrixXd* src = &a;
    Eigen::MatrixXd* dst = &b;
    for (const Eigen::MatrixXd& layer : layers) {
      const Eigen::Index out = layer.rows();
      dst->topRows(out).leftCols(c).noalias() =
          layer * src->topRows(width).leftCols(c);
      leaky_relu(dst->topRows(out).leftCols(c), arch.leakiness);
      std::swap(src, dst);
      width = out;
    }
    for (Eigen::Index i = 0; i < c; ++i) {
      const int pred = (*src)(0, i) >= (*src)(1, i) ? 0 : 1;
      errors += pred != data.labels[static_cast<std::size_t>(start + i)];
    }
    if (stop_early && errors > 0) return errors;
  }
  return errors;
}

}  // namespace

void Arch::validate() const {
  if (layer_widths.size() < 2)
    throw std::invalid_argument("Arch: need at least input and output widths");
  for (int w : layer_widths)
    if (w < 1) throw std::invalid_argument("Arch: layer widths must be >= 1");
  if (layer_widths.back() != 2)
    throw std::invalid_argument("Arch: output width must be 2");
  if (!(leakiness > 0.0) || !(leakiness < 1.0))
    throw std::invalid_argument("Arch: leakiness must lie in (0, 1)");
}

std::string Arch::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < layer_widths.size(); ++i) {
    if (i) os << '-';
    os << layer_widths[i];
  }
  return os.str();
}

int weight_count(const Arch& arch) {
  arch.validate();
  int total = 0;
  for (std::size_t k = 0; k + 1 < arch.layer_widths.size(); ++k)
    total += arch.layer_widths[k] * arch.layer_widths[k + 1];
  return total;
}

Eigen::MatrixXd forward_batch(const Arch& arch, const WeightVector& w,
                              const Eigen::MatrixXd& X) {
  check_shapes(arch, w, X.rows());
  Eigen::MatrixXd activ = X;
  Eigen::MatrixXd next;
  for (const Eigen::MatrixXd& layer : layer_matrices(arch, w)) {
    next.noalias() = layer * activ;
    leaky_relu(next.topRows(next.rows()).leftCols(next.cols()), arch.leakiness);
    activ.swap(next);
  }
  return activ;
}

Eigen::Vector2d forward(const Arch& arch, const WeightVector& w,
                        const Eigen::VectorXd& x) {
  return forward_batch(arch, w, x);
}

int predict(const Arch& arch, const WeightVector& w, const Eigen::VectorXd& x) {
  const Eigen::Vector2d y = forward(arch, w, x);
  return y[0] >= y[1] ? 0 : 1;
}

std::int64_t error_count(const Arch& arch, const WeightVector& w,
                         const LabeledDataset& data) {
  return count_errors(arch, w, data, false);
}

bool zero_train_error(const Arch& arch, const WeightVector& w,
                      const LabeledDataset& data) {
  return count_errors(arch, w, data, true) == 0;
}

double empirical_error(const Arch& arch, const WeightVector& w,
                       const LabeledDataset& data) {
  if (data.size() == 0)
    throw std::invalid_argument("empirical_error: dataset is empty");
  return static_cast<double>(count_errors(arch, w, data, false)) /
         static_cast<double>(data.size());
}

}  // namespace doclab
