// Copyright 2026 The Jerkmeter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <benchmark/benchmark.h>

#include "jerkmeter/degradation.h"
#include "jerkmeter/features.h"
#include "jerkmeter/frame_analysis.h"
#include "jerkmeter/quality_model.h"
#include "jerkmeter/random.h"
#include "jerkmeter/training.h"

namespace jerkmeter {
namespace {

VideoSequence clip(int size, std::size_t frames) {
  SynthConfig cfg;
  cfg.width = cfg.height = size;
  cfg.frames = frames;
  return synth_gradient(cfg);
}

void BM_FrameDiff(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const VideoSequence seq = clip(size, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(frame_diff(seq.frames[0].luma, seq.frames[1].luma));
  state.SetBytesProcessed(state.iterations() * 2 * size * size);
}
BENCHMARK(BM_FrameDiff)->Arg(64)->Arg(352)->Arg(1920);

void BM_ComputeSeries(benchmark::State& state) {
  const VideoSequence seq = clip(128, 250);
  for (auto _ : state) benchmark::DoNotOptimize(compute_series(seq));
}
BENCHMARK(BM_ComputeSeries);

void BM_Analyze(benchmark::State& state) {
  const VideoSequence src = clip(128, 250);
  const DegradedVideo d =
      inject(src, {FreezeKind::kLoss, {{20, 5}, {90, 12}, {200, 3}}});
  for (auto _ : state) benchmark::DoNotOptimize(analyze(d.video));
}
BENCHMARK(BM_Analyze);

void BM_Predict(benchmark::State& state) {
  const QualityModel m = default_model();
  const std::vector<double> x = {0.3, -1.2, 0.8, 0.1, -0.4, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(predict(x, m));
}
BENCHMARK(BM_Predict);

void BM_TrainLm(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  Rng rng(1);
  Eigen::MatrixXd x(52, 6);
  Eigen::VectorXd y(52);
  for (int i = 0; i < 52; ++i) {
    for (int j = 0; j < 6; ++j) x(i, j) = rng.normal();
    y[i] = std::tanh(x(i, 0) - 0.5 * x(i, 3)) + 0.1 * rng.normal();
  }
  LMConfig cfg;
  cfg.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_lm(x, y, hidden, cfg, 7));
}
BENCHMARK(BM_TrainLm)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace jerkmeter

BENCHMARK_MAIN();
