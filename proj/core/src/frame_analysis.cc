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
#include "jerkmeter/frame_analysis.h"

#include <utility>

#include "jerkmeter/errors.h"

namespace jerkmeter {

std::int64_t frame_diff_sum(const LumaFrame& a, const LumaFrame& b) {
  if (a.width != b.width || a.height != b.height ||
      a.samples.size() != b.samples.size()) {
    throw ShapeError("frame_diff: " + std::to_string(a.width) + "x" +
                     std::to_string(a.height) + " vs " +
                     std::to_string(b.width) + "x" + std::to_string(b.height));
  }
  std::int64_t sum = 0;
  const std::size_t n = a.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t d = static_cast<std::int32_t>(b.samples[i]) -
                           static_cast<std::int32_t>(a.samples[i]);
    sum += d * d;
  }
  return sum;
}

double frame_diff(const LumaFrame& a, const LumaFrame& b) {
  const std::int64_t sum = frame_diff_sum(a, b);
  if (a.samples.empty()) return 0.0;
  return static_cast<double>(sum) / static_cast<double>(a.samples.size());
}

FrameDiffSeries compute_series(const VideoSequence& seq) {
  if (seq.frame_count() < 2) throw TooFewFrames(seq.frame_count());
  FrameDiffSeries series;
  series.values.reserve(seq.frame_count() - 1);
  for (std::size_t i = 0; i + 1 < seq.frame_count(); ++i)
    series.values.push_back(frame_diff(seq.luma(i), seq.luma(i + 1)));
  series.scene_cut = detect_scene_cuts(series.values);
  return series;
}

FrameDiffSeries compute_series(FrameSource& source) {
  Frame previous;
  Frame current;
  std::size_t count = 0;
  FrameDiffSeries series;
  if (source.read(previous)) {
    ++count;
    while (source.read(current)) {
      ++count;
      series.values.push_back(frame_diff(previous.luma, current.luma));
      std::swap(previous, current);
    }
  }
  if (count < 2) throw TooFewFrames(count);
  series.scene_cut = detect_scene_cuts(series.values);
  return series;
}

std::vector<bool> detect_scene_cuts(std::span<const double> values) {
  std::vector<bool> flags(values.size(), false);
  for (std::size_t i = kSceneCutHistory; i < values.size(); ++i) {
    double history = 0.0;
    for (std::size_t k = i - kSceneCutHistory; k < i; ++k) history += values[k];
    // 5 * mean(previous five) is exactly the sum of the previous five.
    flags[i] = values[i] > history * (kSceneCutFactor / kSceneCutHistory);
  }
  return flags;
}

BackgroundFd background_fd(const FrameDiffSeries& series,
                           const FreezeTimeline& timeline) {
  const std::vector<bool> frozen = timeline.frozen_mask();
  auto is_frozen = [&](std::size_t f) {
    return f < frozen.size() && frozen[f];
  };
  double sum = 0.0;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    const bool cut = i < series.scene_cut.size() && series.scene_cut[i];
    if (cut || is_frozen(i) || is_frozen(i + 1)) continue;
    sum += series.values[i];
    ++kept;
  }
  if (kept == 0) return {0.0, true};
  return {sum / static_cast<double>(kept), false};
}

}  // namespace jerkmeter
