// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "spec2/linalg.hpp"

namespace {

spec2::ComplexMatrix random_matrix(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  spec2::ComplexMatrix x(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) x(i, j) = spec2::Complex(g(gen), g(gen));
  }
  return x;
}

void BM_EigDense(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const spec2::ComplexMatrix s = random_matrix(d, 11);
  for (auto _ : state) benchmark::DoNotOptimize(spec2::eig_dense(s, state.range(1) != 0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigDense)->ArgsProduct({{16, 32, 64, 128}, {0, 1}})->Complexity(benchmark::oNCubed);

void BM_Cholesky(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const spec2::ComplexMatrix x = random_matrix(d, 12);
  const spec2::ComplexMatrix m = x.adjoint() * x + spec2::ComplexMatrix::Identity(d, d);
  for (auto _ : state) benchmark::DoNotOptimize(spec2::cholesky(m));
}
BENCHMARK(BM_Cholesky)->RangeMultiplier(2)->Range(16, 256);

void BM_SubspaceGap(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  const spec2::ComplexMatrix u = random_matrix(d, 13).leftCols(d / 4);
  const spec2::ComplexMatrix v = random_matrix(d, 14).leftCols(d / 4);
  for (auto _ : state) benchmark::DoNotOptimize(spec2::subspace_gap(u, v));
}
BENCHMARK(BM_SubspaceGap)->RangeMultiplier(2)->Range(32, 256);

}  // namespace
