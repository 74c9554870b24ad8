#include <doctest.h>

#include <cmath>

#include "doclab/network.hpp"
#include "doclab/rng.hpp"

using doclab::Arch;
using doclab::LabeledDataset;
using doclab::RngStream;

namespace {

Arch make_arch(std::vector<int> widths, double leak = 0.1) {
  Arch a;
  a.layer_widths = std::move(widths);
  a.leakiness = leak;
  return a;
}

LabeledDataset make_test_data(const Arch& arch, int n, RngStream& rng) {
  LabeledDataset d;
  d.inputs.resize(arch.input_dim(), n);
  d.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < arch.input_dim(); ++k) d.inputs(k, i) = rng.next_normal();
    d.labels[static_cast<std::size_t>(i)] = rng.next_unit() < 0.5 ? 0 : 1;
  }
  return d;
}

}  // namespace

TEST_CASE("weight_count matches the published architectures") {
  CHECK(doclab::weight_count(make_arch({10, 10, 2})) == 120);
  CHECK(doclab::weight_count(make_arch({10, 100, 2})) == 1200);
  CHECK(doclab::weight_count(
            make_arch({10, 10, 10, 10, 10, 10, 10, 10, 10, 10, 10, 2})) == 1020);
  CHECK(doclab::weight_count(make_arch({784, 2})) == 1568);
  CHECK(doclab::weight_count(make_arch({784, 10, 2})) == 7860);
}

TEST_CASE("arch invariants are enforced") {
  CHECK_THROWS_AS(make_arch({10}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_arch({10, 3}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_arch({10, 0, 2}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_arch({10, 2}, 0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_arch({10, 2}, 1.0).validate(), std::invalid_argument);
  CHECK_NOTHROW(make_arch({10, 2}).validate());
}

TEST_CASE("hand-evaluated single-layer forward") {
  // W = [[1], [-1]], x = [2]: pre-activations (2, -2), leaky slope 0.1.
  const Arch arch = make_arch({1, 2});
  Eigen::VectorXd w(2);
  w << 1.0, -1.0;
  Eigen::VectorXd x(1);
  x << 2.0;
  const Eigen::Vector2d y = doclab::forward(arch, w, x);
  CHECK(y[0] == doctest::Approx(2.0));
  CHECK(y[1] == doctest::Approx(-0.2));
  CHECK(doclab::predict(arch, w, x) == 0);
}

TEST_CASE("zero input maps to zero output") {
  const Arch arch = make_arch({10, 10, 2});
  RngStream rng(1, 0);
  const Eigen::VectorXd w = doclab::sample_unit_sphere(doclab::weight_count(arch), rng);
  const Eigen::Vector2d y =
      doclab::forward(arch, w, Eigen::VectorXd::Zero(10));
  CHECK(y[0] == 0.0);
  CHECK(y[1] == 0.0);
  CHECK(doclab::predict(arch, w, Eigen::VectorXd::Zero(10)) == 0);  // tie rule
}

TEST_CASE("positive homogeneity: scaling all weights scales outputs by s^K") {
  const Arch arch = make_arch({10, 10, 2});
  RngStream rng(2, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::VectorXd w =
        doclab::sample_unit_sphere(doclab::weight_count(arch), rng);
    Eigen::VectorXd x(10);
    for (int i = 0; i < 10; ++i) x[i] = rng.next_normal();
    const double s = 0.25 + 4.0 * rng.next_unit();
    const Eigen::Vector2d base = doclab::forward(arch, w, x);
    const Eigen::Vector2d scaled = doclab::forward(arch, s * w, x);
    const double factor = s * s;  // two layers
    CHECK(scaled[0] == doctest::Approx(factor * base[0]).epsilon(1e-12));
    CHECK(scaled[1] == doctest::Approx(factor * base[1]).epsilon(1e-12));
    CHECK(doclab::predict(arch, s * w, x) == doclab::predict(arch, w, x));
  }
}

TEST_CASE("scaling a single layer block leaves predictions unchanged") {
  const Arch arch = make_arch({10, 10, 2});
  RngStream rng(3, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::VectorXd w =
        doclab::sample_unit_sphere(doclab::weight_count(arch), rng);
    Eigen::VectorXd scaled = w;
    const double s = 0.5 + 2.0 * rng.next_unit();
    scaled.head(100) *= s;  // first layer block (10x10 row-major)
    Eigen::VectorXd x(10);
    for (int i = 0; i < 10; ++i) x[i] = rng.next_normal();
    CHECK(doclab::predict(arch, scaled, x) == doclab::predict(arch, w, x));
  }
}

TEST_CASE("outputs stay finite for finite inputs") {
  const Arch arch = make_arch({10, 10, 10, 10, 2});
  RngStream rng(4, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::VectorXd w =
        doclab::sample_unit_sphere(doclab::weight_count(arch), rng);
    Eigen::VectorXd x(10);
    for (int i = 0; i < 10; ++i) x[i] = 100.0 * rng.next_normal();
    const Eigen::Vector2d y = doclab::forward(arch, w, x);
    CHECK(std::isfinite(y[0]));
    CHECK(std::isfinite(y[1]));
  }
}

TEST_CASE("dimension and length mismatches are rejected") {
  const Arch arch = make_arch({10, 10, 2});
  RngStream rng(5, 0);
  const Eigen::VectorXd w = doclab::sample_unit_sphere(120, rng);
  CHECK_THROWS_AS(doclab::forward(arch, w, Eigen::VectorXd::Zero(9)),
                  std::invalid_argument);
  CHECK_THROWS_AS(doclab::forward(arch, w.head(119), Eigen::VectorXd::Zero(10)),
                  std::invalid_argument);
}

// Oracle: enumerate the four predictions by hand. Weights [1, -1] with a
// [1, 2] arch predict class 0 for x > 0 and class 1 for x < 0.
TEST_CASE("empirical error on a hand-built threshold problem") {
  const Arch arch = make_arch({1, 2});
  Eigen::VectorXd w(2);
  w << 1.0, -1.0;
  LabeledDataset data;
  data.inputs.resize(1, 4);
  data.inputs << 1.0, 2.0, -1.0, -3.0;
  data.labels = {0, 0, 1, 0};  // predictions: 0, 0, 1, 1 -> one mistake
  CHECK(doclab::empirical_error(arch, w, data) == doctest::Approx(0.25));

  data.labels = {0, 0, 1, 1};
  CHECK(doclab::empirical_error(arch, w, data) == 0.0);
}

TEST_CASE("constant classifier scores one half on balanced data") {
  const Arch arch = make_arch({1, 2});
  Eigen::VectorXd w = Eigen::VectorXd::Zero(2);  // all-zero: always class 0
  LabeledDataset data;
  data.inputs.resize(1, 6);
  data.inputs << 1, 2, 3, -1, -2, -3;
  data.labels = {0, 0, 0, 1, 1, 1};
  CHECK(doclab::empirical_error(arch, w, data) == doctest::Approx(0.5));
}

TEST_CASE("empirical error is permutation invariant and lattice valued") {
  const Arch arch = make_arch({10, 10, 2});
  RngStream rng(6, 0);
  const Eigen::VectorXd w = doclab::sample_unit_sphere(120, rng);
  LabeledDataset data = make_test_data(arch, 40, rng);
  const double e = doclab::empirical_error(arch, w, data);
  CHECK(std::round(e * 40.0) == doctest::Approx(e * 40.0));

  // reverse the sample order
  LabeledDataset reversed = data;
  for (int i = 0; i < 40; ++i) {
    reversed.inputs.col(i) = data.inputs.col(39 - i);
    reversed.labels[static_cast<std::size_t>(i)] =
        data.labels[static_cast<std::size_t>(39 - i)];
  }
  CHECK(doclab::empirical_error(arch, w, reversed) == e);
}

TEST_CASE("empty dataset is a precondition error") {
  const Arch arch = make_arch({10, 10, 2});
  RngStream rng(7, 0);
  const Eigen::VectorXd w = doclab::sample_unit_sphere(120, rng);
  LabeledDataset empty;
  empty.inputs.resize(10, 0);
  CHECK_THROWS_AS(doclab::empirical_error(arch, w, empty), std::invalid_argument);
  CHECK(doclab::error_count(arch, w, empty) == 0);
}

TEST_CASE("batch forward agrees with single-sample forward") {
  const Arch arch = make_arch({10, 10, 10, 2});
  RngStream rng(8, 0);
  const Eigen::VectorXd w =
      doclab::sample_unit_sphere(doclab::weight_count(arch), rng);
  const LabeledDataset data = make_test_data(arch, 17, rng);
  const Eigen::MatrixXd batch = doclab::forward_batch(arch, w, data.inputs);
  REQUIRE(batch.rows() == 2);
  REQUIRE(batch.cols() == 17);
  for (int i = 0; i < 17; ++i) {
    const Eigen::Vector2d single = doclab::forward(arch, w, data.inputs.col(i));
    CHECK(batch(0, i) == doctest::Approx(single[0]).epsilon(1e-14));
    CHECK(batch(1, i) == doctest::Approx(single[1]).epsilon(1e-14));
  }
}
