#include <benchmark/benchmark.h>

#include "doclab/erm.hpp"

namespace {

// Cost of one rejection step (sphere draw + training-error check) at the
// sizes the experiments actually run.
void BM_RejectionStep(benchmark::State& state, std::vector<int> widths, int n) {
  doclab::Arch arch;
  arch.layer_widths = widths;
  doclab::GaussianProblem problem;
  problem.dim = arch.input_dim();
  doclab::RngStream data_rng(3, 0);
  const doclab::LabeledDataset train = doclab::gen_gaussian(problem, n, data_rng);
  doclab::RngStream rng(3, 1);
  Eigen::VectorXd w(doclab::weight_count(arch));
  for (auto _ : state) {
    doclab::sample_unit_sphere_into(rng, w);
    benchmark::DoNotOptimize(doclab::error_count(arch, w, train));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_RejectionStep, small_n30, std::vector<int>{10, 10, 2}, 30);
BENCHMARK_CAPTURE(BM_RejectionStep, wide_n30, std::vector<int>{10, 100, 2}, 30);
BENCHMARK_CAPTURE(BM_RejectionStep, deep_n14,
                  std::vector<int>{10, 10, 10, 10, 10, 10, 10, 10, 10, 10, 10, 2}, 14);
BENCHMARK_CAPTURE(BM_RejectionStep, mnist_n24, std::vector<int>{784, 2}, 24);

BENCHMARK_MAIN();
