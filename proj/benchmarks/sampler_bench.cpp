#include <benchmark/benchmark.h>

#include "doclab/rng.hpp"

namespace {

void BM_SphereSample(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  doclab::RngStream rng(7, 0);
  Eigen::VectorXd v(dim);
  for (auto _ : state) {
    doclab::sample_unit_sphere_into(rng, v);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * dim);
}

void BM_Normals(benchmark::State& state) {
  doclab::RngStream rng(7, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rng.next_normal());
}

}  // namespace

BENCHMARK(BM_SphereSample)->Arg(120)->Arg(1020)->Arg(1568)->Arg(7860);
BENCHMARK(BM_Normals);
