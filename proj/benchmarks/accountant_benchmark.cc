//
// Copyright 2026 The Shuffle DP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <cstdint>
#include <vector>

#include "benchmark/benchmark.h"
#include "shuffle_dp/accountant.h"
#include "shuffle_dp/estimation.h"
#include "shuffle_dp/harness/sweep.h"
#include "shuffle_dp/mechanisms.h"
#include "shuffle_dp/oracles.h"

namespace shuffle_dp {
namespace {

void BM_PrivacyLossProfile(benchmark::State& state) {
  const int64_t n = state.range(0);
  auto instance = ShuffleInstance::Create(n, 15, 4.0, (n * 4) / 5).value();
  for (auto _ : state) {
    auto profile = PrivacyLossProfile::Compute(instance);
    benchmark::DoNotOptimize(profile);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_PrivacyLossProfile)
    ->RangeMultiplier(4)
    ->Range(64, 16384)
    ->Complexity(benchmark::oNSquared)
    ->Unit(benchmark::kMillisecond);

void BM_ProfileDelta(benchmark::State& state) {
  auto instance = ShuffleInstance::Create(1000, 15, 4.0, 800).value();
  auto profile = PrivacyLossProfile::Compute(instance).value();
  for (auto _ : state) {
    auto delta = profile.Delta(0.5);
    benchmark::DoNotOptimize(delta);
  }
}
BENCHMARK(BM_ProfileDelta);

void BM_ConvolutionOracle(benchmark::State& state) {
  const int64_t n = state.range(0);
  auto instance = ShuffleInstance::Create(n, 10, 2.0, n / 2).value();
  for (auto _ : state) {
    auto dist = ConvolutionDistribution(instance, true);
    benchmark::DoNotOptimize(dist);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_ConvolutionOracle)
    ->RangeMultiplier(4)
    ->Range(64, 4096)
    ->Complexity(benchmark::oNSquared);

void BM_ReferenceTable(benchmark::State& state) {
  const std::vector<harness::SweepGrid> grids =
      harness::ReferenceTablePreset();
  for (auto _ : state) {
    auto rows = harness::RunSweep(grids, LossFormula::kLegacy);
    benchmark::DoNotOptimize(rows);
  }
}
BENCHMARK(BM_ReferenceTable)->Unit(benchmark::kMillisecond);

void BM_ShuffleHistogram(benchmark::State& state) {
  std::vector<int> records(state.range(0));
  for (size_t i = 0; i < records.size(); ++i) records[i] = i % 15;
  auto data = Dataset::Create(records, 15).value();
  Rng rng(7);
  for (auto _ : state) {
    auto h = ShuffleHistogram(data, 4.0, rng);
    benchmark::DoNotOptimize(h);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ShuffleHistogram)->Arg(1000)->Arg(100000);

void BM_CalibrateGaussian(benchmark::State& state) {
  for (auto _ : state) {
    auto c = CalibrateGaussian(1.0, 1e-5);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_CalibrateGaussian);

}  // namespace
}  // namespace shuffle_dp

BENCHMARK_MAIN();
