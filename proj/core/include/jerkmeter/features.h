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
#ifndef JERKMETER_FEATURES_H_
#define JERKMETER_FEATURES_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "jerkmeter/frame_analysis.h"
#include "jerkmeter/freeze_detection.h"
#include "jerkmeter/timeline.h"
#include "jerkmeter/video_io.h"

namespace jerkmeter {

enum class Feature : std::size_t {
  kNumFz,
  kAvgFzDur,
  kMaxFzDur,
  kStdFzDur,
  kAvgFzDist,
  kMaxFzDist,
  kStdFzDist,
  kRLenFz,
  kRDurDist,
  kAvgFzFD,
  kMaxFzFD,
  kAvgBgFD,
  kRFD,
};

inline constexpr std::size_t kFeatureCount = 13;

std::string_view feature_name(Feature f);
std::optional<Feature> feature_from_name(std::string_view name);
const std::array<Feature, kFeatureCount>& all_features();

struct FeatureVector {
  std::array<double, kFeatureCount> values{};

  double& operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
  double operator[](Feature f) const {
    return values[static_cast<std::size_t>(f)];
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Floor for the rFD denominator, in FD units.
inline constexpr double kRfdEpsilon = 1e-6;

// The nine freeze-pattern entries; the content entries stay 0. Standard
// deviations are population deviations. Zero events leave everything 0; with
// one event the distance statistics use the unfrozen frame count.
FeatureVector freeze_pattern_features(const FreezeTimeline& timeline);

// AvgFzFD, MaxFzFD, AvgBgFD and rFD; the pattern entries stay 0. FzFD of an
// event is the FD of the transition out of its last frozen frame; events that
// run to the final frame have none.
FeatureVector content_features(const FrameDiffSeries& series,
                               const FreezeTimeline& timeline);

FeatureVector extract(const FrameDiffSeries& series,
                      const FreezeTimeline& timeline);

struct Analysis {
  FrameDiffSeries series;
  FreezeTimeline timeline;
  FeatureVector features;
  bool background_all_excluded = false;
};

// Full no-reference pipeline: FD series, freeze detection, features.
Analysis analyze(FrameSource& source, const DetectorConfig& config = {});
Analysis analyze(const VideoSequence& seq, const DetectorConfig& config = {});

}  // namespace jerkmeter

#endif  // JERKMETER_FEATURES_H_
