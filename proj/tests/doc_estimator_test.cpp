#include <doctest.h>

#include <cmath>
#include <sstream>

#include "doclab/doc_histogram.hpp"
#include "doclab/rng.hpp"
#include "test_util.hpp"

using doclab::Arch;
using doclab::DocHistogram;
using doclab::GaussianProblem;
using doclab::LabeledDataset;
using doclab::RngStream;

namespace {

DocHistogram crafted(std::vector<std::pair<int, std::int64_t>> bin_counts,
                     double e_min = 0.0) {
  DocHistogram doc;
  doc.counts.assign(100, 0);
  doc.total_samples = 0;
  for (auto [bin, count] : bin_counts) {
    doc.counts[static_cast<std::size_t>(bin)] += count;
    doc.total_samples += count;
  }
  doc.e_min_estimate = e_min;
  doc.e_min_value = e_min;
  return doc;
}

}  // namespace

TEST_CASE("bin_index handles exact bin-edge rationals") {
  DocHistogram doc;
  doc.bin_count = 100;
  CHECK(doc.bin_index(0.0) == 0);
  CHECK(doc.bin_index(1.0) == 99);
  CHECK(doc.bin_index(0.5) == 50);
  CHECK(doc.bin_index(29.0 / 100.0) == 29);
  CHECK(doc.bin_index(580.0 / 2000.0) == 29);  // 0.29 as a test-set rational
  CHECK(doc.bin_index(579.0 / 2000.0) == 28);
  CHECK(doc.bin_index(0.999) == 99);
  for (int k = 0; k <= 100; ++k) {
    const double e = k / 100.0;
    CHECK(doc.bin_index(e) == (k == 100 ? 99 : k));
  }
}

TEST_CASE("estimate_doc with one sample fills exactly one bin") {
  Arch arch;
  arch.layer_widths = {10, 10, 2};
  RngStream data_rng(1, 0);
  const LabeledDataset test = doclab::gen_gaussian(GaussianProblem{}, 200, data_rng);
  const DocHistogram doc = doclab::estimate_doc(arch, test, 1, 100, 99);
  std::int64_t nonzero = 0, total = 0;
  for (std::int64_t c : doc.counts) {
    nonzero += c > 0;
    total += c;
  }
  CHECK(nonzero == 1);
  CHECK(total == 1);
}

TEST_CASE("g_epsilon counts crafted mass below the threshold") {
  // 30 samples in bin 10 ([0.10, 0.11)), 70 in bin 50; e_min = 0.
  const DocHistogram doc = crafted({{10, 30}, {50, 70}});
  CHECK(doclab::g_epsilon(doc, 0.3) == doctest::Approx(0.3));
  CHECK(doclab::omega_epsilon(doc, 0.3) == doctest::Approx(0.7));
  CHECK(doclab::g_epsilon(doc, 1.0) == doctest::Approx(1.0));
  CHECK(doclab::g_epsilon(doc, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("the threshold bin splits linearly") {
  const DocHistogram doc = crafted({{50, 100}});
  // threshold 0.505 sits halfway through bin 50
  CHECK(doclab::g_epsilon(doc, 0.505) == doctest::Approx(0.5));
  CHECK(doclab::omega_epsilon(doc, 0.505) == doctest::Approx(0.5));
}

TEST_CASE("g_epsilon is monotone and complementary on random histograms") {
  RngStream rng(11, 0);
  for (int rep = 0; rep < 25; ++rep) {
    const DocHistogram doc = doclab::testing::make_random_histogram(rng);
    double prev = -1.0;
    for (double eps = 0.0; eps <= 1.0 - doc.e_min() + 1e-12; eps += 0.03) {
      const double g = doclab::g_epsilon(doc, eps);
      CHECK(g >= prev - 1e-12);
      CHECK(g >= 0.0);
      CHECK(g <= 1.0 + 1e-12);
      CHECK(g + doclab::omega_epsilon(doc, eps) == doctest::Approx(1.0));
      prev = g;
    }
  }
}

TEST_CASE("epsilon range is enforced") {
  const DocHistogram doc = crafted({{50, 10}}, 0.5);
  CHECK_THROWS_AS(doclab::g_epsilon(doc, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(doclab::g_epsilon(doc, 0.6), std::invalid_argument);
}

TEST_CASE("estimate_doc is deterministic and worker-count independent") {
  Arch arch;
  arch.layer_widths = {10, 10, 2};
  RngStream data_rng(2, 0);
  const LabeledDataset test = doclab::gen_gaussian(GaussianProblem{}, 300, data_rng);
  const DocHistogram a = doclab::estimate_doc(arch, test, 500, 100, 7, 1);
  const DocHistogram b = doclab::estimate_doc(arch, test, 500, 100, 7, 4);
  CHECK(a.counts == b.counts);
  CHECK(a.e_min_estimate == b.e_min_estimate);
}

TEST_CASE("two seeds agree within binomial noise") {
  Arch arch;
  arch.layer_widths = {10, 10, 2};
  RngStream data_rng(3, 0);
  const LabeledDataset test = doclab::gen_gaussian(GaussianProblem{}, 500, data_rng);
  const std::int64_t samples = 20000;
  const DocHistogram a = doclab::estimate_doc(arch, test, samples, 100, 1);
  const DocHistogram b = doclab::estimate_doc(arch, test, samples, 100, 2);
  for (int i = 0; i < 100; ++i) {
    const double pooled =
        static_cast<double>(a.counts[static_cast<std::size_t>(i)] +
                            b.counts[static_cast<std::size_t>(i)]) /
        (2.0 * samples);
    const double sigma = std::sqrt(std::max(pooled * (1.0 - pooled), 1e-9) / samples);
    CHECK(std::abs(a.mass(i) - b.mass(i)) < 5.0 * sigma + 5.0 / samples);
  }
}

TEST_CASE("random labels concentrate the DOC at one half") {
  Arch arch;
  arch.layer_widths = {10, 10, 2};
  RngStream data_rng(4, 0);
  LabeledDataset test = doclab::gen_gaussian(GaussianProblem{}, 2000, data_rng);
  RngStream label_rng(4, 1);
  test = doclab::with_random_labels(test, label_rng);
  const DocHistogram doc = doclab::estimate_doc(arch, test, 2000, 100, 5);
  double near_half = 0.0;
  for (int i = 0; i < 100; ++i)
    if (doc.bin_right(i) > 0.45 && doc.bin_left(i) < 0.55) near_half += doc.mass(i);
  CHECK(near_half > 0.99);
}

TEST_CASE("e_min_estimate lies inside the first occupied bin") {
  Arch arch;
  arch.layer_widths = {10, 10, 2};
  RngStream data_rng(5, 0);
  const LabeledDataset test = doclab::gen_gaussian(GaussianProblem{}, 400, data_rng);
  const DocHistogram doc = doclab::estimate_doc(arch, test, 3000, 100, 21);
  int first = -1;
  for (int i = 0; i < 100 && first < 0; ++i)
    if (doc.counts[static_cast<std::size_t>(i)] > 0) first = i;
  REQUIRE(first >= 0);
  CHECK(doc.e_min_estimate >= doc.bin_left(first));
  CHECK(doc.e_min_estimate < doc.bin_right(first));
}

TEST_CASE("json serialization round-trips") {
  RngStream rng(6, 0);
  DocHistogram doc = doclab::testing::make_random_histogram(rng);
  doc.set_analytic_e_min(0.02275013194817922);
  doc.source = {"10-10-2", "gaussian/test", 77, "pcg64"};
  const DocHistogram back = DocHistogram::from_json_string(doc.to_json_string());
  CHECK(back.counts == doc.counts);
  CHECK(back.total_samples == doc.total_samples);
  CHECK(back.e_min_estimate == doc.e_min_estimate);
  CHECK(back.e_min_value == doc.e_min_value);
  CHECK(back.e_min_policy == "analytic-bayes");
  CHECK(back.source.arch == "10-10-2");
  CHECK(back.source.seed == 77);
}

TEST_CASE("csv output carries one row per bin that sums to one") {
  const DocHistogram doc = crafted({{10, 25}, {60, 75}});
  std::ostringstream out;
  doc.write_csv(out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "bin_left,bin_right,count,normalized_mass");
  int rows = 0;
  double mass = 0.0;
  while (std::getline(in, line)) {
    ++rows;
    const auto last_comma = line.rfind(',');
    mass += std::stod(line.substr(last_comma + 1));
  }
  CHECK(rows == 100);
  CHECK(mass == doctest::Approx(1.0));
}
