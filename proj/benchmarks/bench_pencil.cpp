// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "spec2/galerkin.hpp"
#include "spec2/models.hpp"
#include "spec2/pencil.hpp"

namespace {

// Full pipeline on the shift section: assembly, companion, eigensolve.
void BM_Spec2BilateralSection(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto model = spec2::make_bilateral_shift(2 * n + 3);
  const spec2::TrialSpace space = model->section(n);
  for (auto _ : state) {
    const spec2::GalerkinMatrices g = spec2::assemble(*model, space);
    benchmark::DoNotOptimize(spec2::spec2(g));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Spec2BilateralSection)->RangeMultiplier(2)->Range(4, 64)->Complexity(benchmark::oNCubed);

void BM_Spec2Shifted(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto model = spec2::make_unbounded_diagonal(n + 2, "linear");
  const spec2::TrialSpace space = model->perturbed_space(n, 1.0 / static_cast<double>(n * n));
  const spec2::GalerkinMatrices g = spec2::assemble_shifted(*model, space, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(spec2::spec2_shifted(g));
}
BENCHMARK(BM_Spec2Shifted)->RangeMultiplier(2)->Range(8, 128);

void BM_ClusterAndGamma(benchmark::State& state) {
  const std::size_t n = 32;
  const auto model = spec2::make_deflated_identity(n + 2);
  const spec2::GalerkinMatrices g = spec2::assemble(*model, model->trial_space(n, 1.0 / n));
  const spec2::Spec2Result base = spec2::spec2(g);
  for (auto _ : state) {
    spec2::Spec2Result r = base;
    const std::size_t id = spec2::cluster(r, 0.0, 0.5);
    const spec2::SpectralSubspace sub = spec2::subspace(r, id);
    benchmark::DoNotOptimize(spec2::residual_gamma(g, sub.minus, r.values().front()));
  }
}
BENCHMARK(BM_ClusterAndGamma);

}  // namespace
