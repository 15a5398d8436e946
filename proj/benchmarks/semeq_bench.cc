// Copyright 2026 The semeq Authors
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

#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "semeq/channel.h"
#include "semeq/codebook.h"
#include "semeq/harness.h"
#include "semeq/language.h"
#include "semeq/random.h"
#include "semeq/transport.h"

namespace semeq {
namespace {

PointCloud RandomCloud(Rng& rng, int n) {
  std::vector<Eigen::Vector2d> pts;
  for (int k = 0; k < n; ++k) {
    pts.emplace_back(2 * UnitUniform(rng) - 1, 2 * UnitUniform(rng) - 1);
  }
  return PointCloud::Uniform(std::move(pts));
}

void BM_ExactEmd(benchmark::State& state) {
  Rng rng(1);
  const int n = static_cast<int>(state.range(0));
  const PointCloud a = RandomCloud(rng, n);
  const PointCloud b = RandomCloud(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(ExactEmd(a, b));
}
BENCHMARK(BM_ExactEmd)->Arg(16)->Arg(64)->Arg(100);

// Entropic regularization as a fraction of the mean squared distance.
void BM_Sinkhorn(benchmark::State& state) {
  Rng rng(2);
  const PointCloud a = RandomCloud(rng, 64);
  const PointCloud b = RandomCloud(rng, 64);
  const double eps = MeanSquaredDistance(a, b) / state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(Sinkhorn(a, b, eps));
}
BENCHMARK(BM_Sinkhorn)->Arg(10)->Arg(100);

void BM_FitAffineMap(benchmark::State& state) {
  Rng rng(3);
  const PointCloud a = RandomCloud(rng, 40);
  PointCloud b = a;
  for (auto& p : b.points) p = 0.9 * p + Eigen::Vector2d(0.1, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(FitAffineMap(a, b));
}
BENCHMARK(BM_FitAffineMap);

void BM_BuildCodebook(benchmark::State& state) {
  const Language src = Language::Synthesize(GridConfig{}, 11);
  const Language tgt = Language::Synthesize(GridConfig{}, 12);
  for (auto _ : state) benchmark::DoNotOptimize(BuildCodebook(src, tgt));
}
BENCHMARK(BM_BuildCodebook)->Unit(benchmark::kMillisecond);

void BM_Episode(benchmark::State& state) {
  SweepConfig cfg;
  cfg.source_seed = 11;
  cfg.target_seed = 12;
  const Scenario scenario = MakeScenario(cfg);
  const AwgnChannel channel(6.0);
  const auto strategy = static_cast<Strategy>(state.range(0));
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        RunEpisode(scenario, strategy, channel, kInfinity, ++seed));
  }
}
BENCHMARK(BM_Episode)->DenseRange(0, 4);

}  // namespace
}  // namespace semeq

BENCHMARK_MAIN();
