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
#include "jerkmeter/freeze_detection.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "jerkmeter/errors.h"

namespace jerkmeter {
namespace {

std::size_t overlap(const FreezeEvent& a, const FreezeEvent& b) {
  const std::size_t lo = std::max(a.start, b.start);
  const std::size_t hi = std::min(a.end(), b.end());
  return hi > lo ? hi - lo : 0;
}

}  // namespace

void DetectorConfig::validate() const {
  if (!std::isfinite(epsilon_abs) || epsilon_abs < 0.0)
    throw ConfigError("epsilon_abs must be finite and non-negative");
  if (!std::isfinite(rel_factor) || rel_factor < 0.0)
    throw ConfigError("rel_factor must be finite and non-negative");
}

double robust_background(std::span<const double> values, double epsilon_abs) {
  std::vector<double> active;
  for (double v : values)
    if (v > epsilon_abs) active.push_back(v);
  if (active.empty()) return 0.0;
  const std::size_t mid = active.size() / 2;
  std::nth_element(active.begin(), active.begin() + mid, active.end());
  const double upper = active[mid];
  if (active.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(active.begin(), active.begin() + mid);
  return 0.5 * (lower + upper);
}

double detection_threshold(std::span<const double> values,
                           const DetectorConfig& config) {
  return std::max(config.epsilon_abs,
                  config.rel_factor *
                      robust_background(values, config.epsilon_abs));
}

FreezeTimeline detect_freezes(const FrameDiffSeries& series,
                              const DetectorConfig& config, double fps) {
  config.validate();
  if (series.values.empty()) throw TooFewFrames(series.values.size());
  const double threshold = detection_threshold(series.values, config);

  FreezeTimeline timeline;
  timeline.frame_count = series.frame_count();
  timeline.fps = fps;

  std::size_t run_start = 0;
  std::size_t run_length = 0;
  auto close_run = [&] {
    if (run_length >= kMinFreezeDuration)
      timeline.events.push_back({run_start, run_length});
    run_length = 0;
  };
  for (std::size_t frame = 1; frame < timeline.frame_count; ++frame) {
    const std::size_t t = frame - 1;
    const bool cut = t < series.scene_cut.size() && series.scene_cut[t];
    if (!cut && series.values[t] <= threshold) {
      if (run_length == 0) run_start = frame;
      ++run_length;
    } else {
      close_run();
    }
  }
  close_run();
  return timeline;
}

DetectionReport score_detection(const FreezeTimeline& found,
                                const FreezeTimeline& truth) {
  if (found.frame_count != truth.frame_count)
    throw ShapeError("score_detection: frame counts differ (" +
                     std::to_string(found.frame_count) + " vs " +
                     std::to_string(truth.frame_count) + ")");
  DetectionReport report;
  report.total_true = truth.events.size();
  report.found = found.events.size();
  for (const FreezeEvent& t : truth.events) {
    for (const FreezeEvent& f : found.events) {
      if (2 * overlap(t, f) >= t.duration) {
        ++report.correctly_detected;
        break;
      }
    }
  }
  for (const FreezeEvent& f : found.events) {
    const bool hits = std::any_of(
        truth.events.begin(), truth.events.end(),
        [&](const FreezeEvent& t) { return overlap(t, f) > 0; });
    if (!hits) ++report.false_alarms;
  }
  if (report.total_true > 0)
    report.detection_rate = static_cast<double>(report.correctly_detected) /
                            static_cast<double>(report.total_true);
  if (report.found > 0)
    report.false_alarm_rate = static_cast<double>(report.false_alarms) /
                              static_cast<double>(report.found);
  return report;
}

}  // namespace jerkmeter
