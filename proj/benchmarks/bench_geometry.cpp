// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "spec2/geometry.hpp"

namespace {

spec2::SpectralSample circle(std::size_t k) {
  std::vector<spec2::Complex> pts;
  for (std::size_t i = 0; i < k; ++i) {
    pts.push_back(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k)));
  }
  return spec2::SpectralSample(std::move(pts));
}

void BM_Membership(benchmark::State& state) {
  const spec2::SpectralSample s = circle(static_cast<std::size_t>(state.range(0)));
  const spec2::Complex z(0.3, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(spec2::membership(s, z));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Membership)->RangeMultiplier(4)->Range(8, 2048)->Complexity(benchmark::oNLogN);

void BM_DistToQ(benchmark::State& state) {
  const spec2::SpectralSample s({{1.0, 0.0}, {2.0, 0.0}, {4.0, 0.0}});
  const spec2::Complex z(2.5, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(spec2::dist_to_Q(s, z, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_DistToQ)->Arg(16)->Arg(64);

void BM_TripleRegion(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        spec2::q_region_boundary({1.0, 0.0}, {2.0, 0.0}, {4.0, 0.0}, spec2::ArcSign::plus, 64));
  }
}
BENCHMARK(BM_TripleRegion);

}  // namespace
