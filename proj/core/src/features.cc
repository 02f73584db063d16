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
#include "jerkmeter/features.h"

#include <algorithm>
#include <cmath>
#include <vector>

namespace jerkmeter {
namespace {

constexpr std::array<std::string_view, kFeatureCount> kNames = {
    "NumFz",     "AvgFzDur",  "MaxFzDur", "StdFzDur", "AvgFzDist",
    "MaxFzDist", "StdFzDist", "rLenFz",   "rDurDist", "AvgFzFD",
    "MaxFzFD",   "AvgBgFD",   "rFD"};

struct Stats {
  double mean = 0.0;
  double max = 0.0;
  double stddev = 0.0;
};

Stats summarize(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  s.max = *std::max_element(xs.begin(), xs.end());
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(xs.size()));
  return s;
}

}  // namespace

std::string_view feature_name(Feature f) {
  return kNames[static_cast<std::size_t>(f)];
}

std::optional<Feature> feature_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    if (kNames[i] == name) return static_cast<Feature>(i);
  return std::nullopt;
}

const std::array<Feature, kFeatureCount>& all_features() {
  static const std::array<Feature, kFeatureCount> features = [] {
    std::array<Feature, kFeatureCount> out{};
    for (std::size_t i = 0; i < kFeatureCount; ++i)
      out[i] = static_cast<Feature>(i);
    return out;
  }();
  return features;
}

FeatureVector freeze_pattern_features(const FreezeTimeline& timeline) {
  FeatureVector fv;
  const auto& events = timeline.events;
  if (events.empty()) return fv;

  std::vector<double> durations;
  for (const FreezeEvent& e : events)
    durations.push_back(static_cast<double>(e.duration));
  const double frozen = static_cast<double>(timeline.frozen_frames());

  std::vector<double> distances;
  if (events.size() == 1) {
    distances.push_back(static_cast<double>(timeline.frame_count) - frozen);
  } else {
    for (std::size_t i = 1; i < events.size(); ++i)
      distances.push_back(
          static_cast<double>(events[i].start - events[i - 1].end()));
  }

  const Stats dur = summarize(durations);
  const Stats dist = summarize(distances);
  fv[Feature::kNumFz] = static_cast<double>(events.size());
  fv[Feature::kAvgFzDur] = dur.mean;
  fv[Feature::kMaxFzDur] = dur.max;
  fv[Feature::kStdFzDur] = dur.stddev;
  fv[Feature::kAvgFzDist] = dist.mean;
  fv[Feature::kMaxFzDist] = dist.max;
  fv[Feature::kStdFzDist] = dist.stddev;
  fv[Feature::kRLenFz] =
      timeline.frame_count > 0
          ? frozen / static_cast<double>(timeline.frame_count)
          : 0.0;
  fv[Feature::kRDurDist] = dist.mean > 0.0 ? dur.mean / dist.mean : 0.0;
  return fv;
}

FeatureVector content_features(const FrameDiffSeries& series,
                               const FreezeTimeline& timeline) {
  FeatureVector fv;
  std::vector<double> post_freeze;
  for (const FreezeEvent& e : timeline.events) {
    const std::size_t transition = e.last();
    if (transition < series.values.size())
      post_freeze.push_back(series.values[transition]);
  }
  const Stats fz = summarize(post_freeze);
  const BackgroundFd bg = background_fd(series, timeline);
  fv[Feature::kAvgFzFD] = fz.mean;
  fv[Feature::kMaxFzFD] = fz.max;
  fv[Feature::kAvgBgFD] = bg.value;
  fv[Feature::kRFD] = fz.mean / std::max(bg.value, kRfdEpsilon);
  return fv;
}

FeatureVector extract(const FrameDiffSeries& series,
                      const FreezeTimeline& timeline) {
  FeatureVector fv = freeze_pattern_features(timeline);
  const FeatureVector content = content_features(series, timeline);
  for (Feature f : {Feature::kAvgFzFD, Feature::kMaxFzFD, Feature::kAvgBgFD,
                    Feature::kRFD})
    fv[f] = content[f];
  return fv;
}

Analysis analyze(FrameSource& source, const DetectorConfig& config) {
  Analysis a;
  a.series = compute_series(source);
  a.timeline = detect_freezes(a.series, config, source.header().fps());
  a.features = extract(a.series, a.timeline);
  a.background_all_excluded = background_fd(a.series, a.timeline).all_excluded;
  return a;
}

Analysis analyze(const VideoSequence& seq, const DetectorConfig& config) {
  SequenceSource source(seq);
  return analyze(source, config);
}

}  // namespace jerkmeter
