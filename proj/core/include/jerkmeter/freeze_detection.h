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
#ifndef JERKMETER_FREEZE_DETECTION_H_
#define JERKMETER_FREEZE_DETECTION_H_

#include <cstddef>
#include <span>

#include "jerkmeter/frame_analysis.h"
#include "jerkmeter/timeline.h"

namespace jerkmeter {

// Freeze threshold T = max(epsilon_abs, rel_factor * median of the FD values
// strictly above epsilon_abs). A transition with FD <= T marks the later
// frame as a duplicate.
struct DetectorConfig {
  double epsilon_abs = 0.05;
  double rel_factor = 0.02;

  void validate() const;  // both knobs finite and >= 0, else ConfigError
};

double robust_background(std::span<const double> values, double epsilon_abs);
double detection_threshold(std::span<const double> values,
                           const DetectorConfig& config);

// Runs shorter than kMinFreezeDuration are discarded. Scene-cut transitions
// never mark a frame frozen. Throws TooFewFrames on an empty series.
FreezeTimeline detect_freezes(const FrameDiffSeries& series,
                              const DetectorConfig& config = {},
                              double fps = 0.0);

struct DetectionReport {
  std::size_t total_true = 0;
  std::size_t correctly_detected = 0;
  double detection_rate = 0.0;
  std::size_t found = 0;
  std::size_t false_alarms = 0;
  double false_alarm_rate = 0.0;
};

// A true event is detected when one found event covers at least half of its
// frames. A found event overlapping no true event is a false alarm; the
// false-alarm rate is over found events. Throws ShapeError on frame_count
// mismatch.
DetectionReport score_detection(const FreezeTimeline& found,
                                const FreezeTimeline& truth);

}  // namespace jerkmeter

#endif  // JERKMETER_FREEZE_DETECTION_H_
