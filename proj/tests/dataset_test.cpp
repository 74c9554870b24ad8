#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "doclab/dataset.hpp"

using doclab::GaussianProblem;
using doclab::LabeledDataset;
using doclab::RngStream;

TEST_CASE("bayes error anchors") {
  GaussianProblem p;  // offset 1.0, std 0.5
  // Phi(-2), the 2.28% overlap.
  CHECK(doclab::bayes_error_gaussian(p) == doctest::Approx(0.02275013194817922).epsilon(1e-9));

  p.center_offset = 0.0;
  CHECK(doclab::bayes_error_gaussian(p) == doctest::Approx(0.5));

  p.center_offset = 1.0;
  p.class_std = 1.0;
  // Phi(-1)
  CHECK(doclab::bayes_error_gaussian(p) == doctest::Approx(0.15865525393145707).epsilon(1e-9));
}

TEST_CASE("bayes error is monotone in the separation ratio") {
  GaussianProblem p;
  double prev = 0.5;
  for (double offset : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
    p.center_offset = offset;
    const double e = doclab::bayes_error_gaussian(p);
    CHECK(e <= prev + 1e-15);
    prev = e;
  }
}

TEST_CASE("gen_gaussian n=0 yields an empty dataset") {
  RngStream rng(1, 0);
  const LabeledDataset d = doclab::gen_gaussian(GaussianProblem{}, 0, rng);
  CHECK(d.size() == 0);
  CHECK(d.dim() == 10);
}

TEST_CASE("gen_gaussian sample moments match the problem definition") {
  const GaussianProblem p;
  const std::int64_t n = 100000;
  RngStream rng(7, 0);
  const LabeledDataset d = doclab::gen_gaussian(p, n, rng);
  REQUIRE(d.size() == n);

  std::int64_t zeros = 0;
  double sum_first_given_zero = 0.0;
  double sum_sq_second = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    if (d.labels[static_cast<std::size_t>(i)] == 0) {
      ++zeros;
      sum_first_given_zero += d.inputs(0, i);
    }
    sum_sq_second += d.inputs(1, i) * d.inputs(1, i);
  }
  // Label marginal Bernoulli(1/2); binomial CI oracle.
  CHECK(std::abs(static_cast<double>(zeros) / n - 0.5) < 0.01);
  // Class-0 first coordinate centered at +1.
  CHECK(sum_first_given_zero / zeros == doctest::Approx(1.0).epsilon(0.01));
  // Off-axis coordinate has mean 0 and variance std^2 = 0.25.
  CHECK(sum_sq_second / n == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("the balanced variant alternates labels exactly") {
  const GaussianProblem p;
  RngStream rng(8, 0);
  const LabeledDataset d = doclab::gen_gaussian_balanced(p, 10001, rng);
  std::int64_t zeros = 0;
  for (std::int64_t i = 0; i < d.size(); ++i)
    zeros += d.labels[static_cast<std::size_t>(i)] == 0;
  CHECK(zeros == 5001);  // odd n: class 0 gets the extra sample

  // class-conditional first-coordinate means still match the centers
  double sum0 = 0.0, sum1 = 0.0;
  for (std::int64_t i = 0; i < d.size(); ++i) {
    if (d.labels[static_cast<std::size_t>(i)] == 0) sum0 += d.inputs(0, i);
    else sum1 += d.inputs(0, i);
  }
  CHECK(sum0 / 5001 == doctest::Approx(1.0).epsilon(0.03));
  CHECK(sum1 / 5000 == doctest::Approx(-1.0).epsilon(0.03));
}

TEST_CASE("draw_training_set with n = pool size is a permutation") {
  RngStream pool_rng(2, 0);
  const LabeledDataset pool = doclab::gen_gaussian(GaussianProblem{}, 50, pool_rng);
  RngStream rng(2, 1);
  const LabeledDataset drawn = doclab::draw_training_set(pool, 50, rng);
  REQUIRE(drawn.size() == 50);
  // Same multiset of first coordinates.
  std::vector<double> a(50), b(50);
  for (int i = 0; i < 50; ++i) {
    a[static_cast<std::size_t>(i)] = pool.inputs(0, i);
    b[static_cast<std::size_t>(i)] = drawn.inputs(0, i);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("draw_training_set is deterministic under a fixed stream") {
  RngStream pool_rng(3, 0);
  const LabeledDataset pool = doclab::gen_gaussian(GaussianProblem{}, 20, pool_rng);
  RngStream r1(3, 9), r2(3, 9);
  const LabeledDataset d1 = doclab::draw_training_set(pool, 1, r1);
  const LabeledDataset d2 = doclab::draw_training_set(pool, 1, r2);
  CHECK(d1.inputs == d2.inputs);
  CHECK(d1.labels == d2.labels);
}

TEST_CASE("draw_training_set rejects oversized requests") {
  RngStream pool_rng(4, 0);
  const LabeledDataset pool = doclab::gen_gaussian(GaussianProblem{}, 5, pool_rng);
  RngStream rng(4, 1);
  CHECK_THROWS_AS(doclab::draw_training_set(pool, 6, rng), std::invalid_argument);
}

// Oracle: drawing 10 of 20 without replacement includes each element with
// probability 1/2 (hypergeometric marginal).
TEST_CASE("draw_training_set inclusion frequencies are hypergeometric") {
  RngStream pool_rng(5, 0);
  LabeledDataset pool = doclab::gen_gaussian(GaussianProblem{}, 20, pool_rng);
  for (int i = 0; i < 20; ++i) pool.inputs(0, i) = i;  // tag samples

  std::vector<int> included(20, 0);
  const int draws = 10000;
  for (int rep = 0; rep < draws; ++rep) {
    RngStream rng(5, static_cast<std::uint64_t>(rep) + 1);
    const LabeledDataset d = doclab::draw_training_set(pool, 10, rng);
    for (int i = 0; i < 10; ++i)
      ++included[static_cast<std::size_t>(std::lround(d.inputs(0, i)))];
  }
  for (int i = 0; i < 20; ++i)
    CHECK(std::abs(static_cast<double>(included[static_cast<std::size_t>(i)]) / draws -
                   0.5) < 0.02);
}

TEST_CASE("with_random_labels flips labels but not inputs") {
  RngStream pool_rng(6, 0);
  const LabeledDataset pool = doclab::gen_gaussian(GaussianProblem{}, 10000, pool_rng);
  RngStream rng(6, 1);
  const LabeledDataset flipped = doclab::with_random_labels(pool, rng);
  CHECK(flipped.inputs == pool.inputs);
  std::int64_t ones = std::accumulate(flipped.labels.begin(), flipped.labels.end(),
                                      std::int64_t{0});
  CHECK(std::abs(static_cast<double>(ones) / 10000.0 - 0.5) < 0.03);
}
