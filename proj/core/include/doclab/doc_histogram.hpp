#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "doclab/dataset.hpp"
#include "doclab/network.hpp"

namespace doclab {

/// Where a DOC histogram came from; echoed into serialized artifacts.
struct DocSource {
  std::string arch;
  std::string dataset_id;
  std::uint64_t seed = 0;
  std::string generator = "pcg64";
};

/// Density of classifiers over true error, as a histogram of `bin_count`
/// uniform bins on [0, 1]. The uniform sphere measure is a probability
/// measure, so the normalized masses counts[i] / total_samples integrate the
/// density directly.
///
/// e_min_estimate is the smallest error observed while sampling. e_min_value
/// is the value every threshold (g_eps, bound formulas) actually uses: it
/// defaults to the estimate and is replaced by the analytic minimum where one
/// exists (the synthetic Gaussian problem). One source of truth, recorded in
/// e_min_policy.
struct DocHistogram {
  int bin_count = 100;
  std::vector<std::int64_t> counts;
  std::int64_t total_samples = 0;
  double e_min_estimate = 1.0;
  double e_min_value = 1.0;
  std::string e_min_policy = "doc-estimate";
  DocSource source;

  double bin_width() const { return 1.0 / bin_count; }
  double bin_left(int i) const { return static_cast<double>(i) / bin_count; }
  double bin_right(int i) const { return static_cast<double>(i + 1) / bin_count; }
  double bin_mid(int i) const { return (i + 0.5) / bin_count; }
  double mass(int i) const {
    return static_cast<double>(counts[static_cast<std::size_t>(i)]) /
           static_cast<double>(total_samples);
  }
  double e_min() const { return e_min_value; }

  /// Index of the bin containing e, exact on bin-edge ties (errors are
  /// rationals k/m and edges are i/bins; equal reals compare equal as
  /// doubles, so the edge correction below is exact).
  int bin_index(double e) const;

  void set_analytic_e_min(double value);
  void validate() const;  // throws std::invalid_argument

  std::string to_json_string() const;
  static DocHistogram from_json_string(const std::string& text);
  void write_csv(std::ostream& out) const;
};

/// Sample `samples` weight vectors uniformly from the unit sphere of the
/// architecture's weight space, measure each one's empirical error on
/// `test_set`, and bin the results. Sample i always draws from the stream
/// (seed, streams::make(kDocSample, i >> 32, i)), so the histogram is a pure
/// function of (arch, test_set, samples, bins, seed) for any worker count.
DocHistogram estimate_doc(const Arch& arch, const LabeledDataset& test_set,
                          std::int64_t samples, int bins, std::uint64_t seed,
                          int workers = 0);

/// Normalized mass with E < e_min + epsilon; the bin straddling the threshold
/// contributes the linear fraction of its mass below it.
double g_epsilon(const DocHistogram& doc, double epsilon);

/// Normalized mass with E >= e_min + epsilon; complement of g_epsilon.
double omega_epsilon(const DocHistogram& doc, double epsilon);

}  // namespace doclab
