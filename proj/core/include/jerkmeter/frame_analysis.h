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
#ifndef JERKMETER_FRAME_ANALYSIS_H_
#define JERKMETER_FRAME_ANALYSIS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "jerkmeter/timeline.h"
#include "jerkmeter/video_io.h"

namespace jerkmeter {

// values[i] is the frame difference between frame i and frame i + 1.
struct FrameDiffSeries {
  std::vector<double> values;
  std::vector<bool> scene_cut;

  std::size_t size() const { return values.size(); }
  std::size_t frame_count() const { return values.size() + 1; }
};

// Exact sum of squared luma differences. Throws ShapeError on size mismatch.
std::int64_t frame_diff_sum(const LumaFrame& a, const LumaFrame& b);

// Mean squared luma difference; one division of the exact integer sum.
double frame_diff(const LumaFrame& a, const LumaFrame& b);

// Both overloads annotate scene cuts. The streaming overload holds at most
// two frames at a time. Throws TooFewFrames when fewer than 2 frames exist.
FrameDiffSeries compute_series(const VideoSequence& seq);
FrameDiffSeries compute_series(FrameSource& source);

inline constexpr std::size_t kSceneCutHistory = 5;
inline constexpr double kSceneCutFactor = 5.0;

// Entry i is a cut iff i >= 5 and values[i] exceeds 5x the mean of the
// preceding five raw values (frozen zeros included).
std::vector<bool> detect_scene_cuts(std::span<const double> values);

struct BackgroundFd {
  double value = 0.0;
  bool all_excluded = false;
};

// Mean FD over transitions that are not scene cuts and touch no frozen frame.
BackgroundFd background_fd(const FrameDiffSeries& series,
                           const FreezeTimeline& timeline);

}  // namespace jerkmeter

#endif  // JERKMETER_FRAME_ANALYSIS_H_
