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

#include <gtest/gtest.h>

#include <cmath>

#include "jerkmeter/degradation.h"
#include "jerkmeter/errors.h"
#include "test_support.h"

namespace jerkmeter {
namespace {

FrameDiffSeries series_of(std::vector<double> v) {
  FrameDiffSeries s;
  s.values = std::move(v);
  s.scene_cut = detect_scene_cuts(s.values);
  return s;
}

TEST(DetectFreezesTest, StaticClipIsOneEvent) {
  const FreezeTimeline t = detect_freezes(series_of(std::vector<double>(9, 0.0)));
  ASSERT_EQ(t.events.size(), 1u);
  EXPECT_EQ(t.events[0], (FreezeEvent{1, 9}));
  EXPECT_EQ(t.frame_count, 10u);
}

TEST(DetectFreezesTest, RuleTrace) {
  DetectorConfig cfg;
  cfg.epsilon_abs = 0.01;
  const FreezeTimeline t = detect_freezes(series_of({9, 0, 0, 0, 9, 9}), cfg);
  ASSERT_EQ(t.events.size(), 1u);
  EXPECT_EQ(t.events[0], (FreezeEvent{2, 3}));
  EXPECT_DOUBLE_EQ(robust_background(std::vector<double>{9, 0, 0, 0, 9, 9}, 0.01),
                   9.0);
}

TEST(DetectFreezesTest, SingleFrameRunsDiscarded) {
  EXPECT_TRUE(detect_freezes(series_of({9, 0, 9, 9, 9, 9})).events.empty());
}

TEST(DetectFreezesTest, SceneCutTransitionNeverFrozen) {
  FrameDiffSeries s = series_of({0, 0, 0, 0});
  s.scene_cut = {false, false, true, false};
  const FreezeTimeline t = detect_freezes(s);
  // Frames 1-2 frozen, frame 3 blocked by the cut, frame 4 alone.
  ASSERT_EQ(t.events.size(), 1u);
  EXPECT_EQ(t.events[0], (FreezeEvent{1, 2}));
}

TEST(DetectFreezesTest, RelativeThresholdTracksMotion) {
  // Median active FD 100 -> threshold 2; a run of FD 1.5 counts as frozen.
  DetectorConfig cfg;
  const std::vector<double> v = {100, 100, 1.5, 1.5, 1.5, 100, 100, 100};
  EXPECT_DOUBLE_EQ(detection_threshold(v, cfg), 2.0);
  const FreezeTimeline t = detect_freezes(series_of(v), cfg);
  ASSERT_EQ(t.events.size(), 1u);
  EXPECT_EQ(t.events[0], (FreezeEvent{3, 3}));
}

TEST(DetectFreezesTest, EvenMedianAveragesMiddlePair) {
  EXPECT_DOUBLE_EQ(robust_background(std::vector<double>{1, 2, 3, 10}, 0.0),
                   2.5);
  EXPECT_DOUBLE_EQ(robust_background(std::vector<double>{0, 0}, 0.0), 0.0);
}

TEST(DetectFreezesTest, EmptySeriesAndBadConfig) {
  EXPECT_THROW(detect_freezes(FrameDiffSeries{}), TooFewFrames);
  DetectorConfig bad;
  bad.epsilon_abs = -1;
  EXPECT_THROW(detect_freezes(series_of({1, 2}), bad), ConfigError);
}

TEST(DetectFreezesTest, EventsSortedSeparatedAndLongEnough) {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v;
    const auto n = rng.uniform_int(1, 80);
    for (int i = 0; i < n; ++i)
      v.push_back(rng.uniform01() < 0.4 ? 0.0 : rng.uniform(0.0, 20.0));
    const FreezeTimeline t = detect_freezes(series_of(v));
    EXPECT_NO_THROW(t.validate());
  }
}

TEST(DetectFreezesTest, ThresholdMonotoneInBothKnobs) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v;
    for (int i = 0; i < 60; ++i) v.push_back(rng.uniform(0.0, 3.0) * rng.uniform01());
    const FrameDiffSeries s = series_of(v);
    const DetectorConfig hi{rng.uniform(0.0, 1.0), rng.uniform(0.0, 0.5)};
    const DetectorConfig lo{hi.epsilon_abs * rng.uniform01(),
                            hi.rel_factor * rng.uniform01()};
    EXPECT_LE(detection_threshold(v, lo), detection_threshold(v, hi));
    const auto mask_hi = detect_freezes(s, hi).frozen_mask();
    const auto mask_lo = detect_freezes(s, lo).frozen_mask();
    // Frame-level frozen sets shrink; the >= 2 filter can only drop frames.
    for (std::size_t f = 0; f < mask_lo.size(); ++f) {
      const bool raw_lo = f > 0 && v[f - 1] <= detection_threshold(v, lo) &&
                          !s.scene_cut[f - 1];
      const bool raw_hi = f > 0 && v[f - 1] <= detection_threshold(v, hi) &&
                          !s.scene_cut[f - 1];
      EXPECT_LE(raw_lo, raw_hi);
      EXPECT_LE(mask_lo[f], raw_lo);
      EXPECT_LE(mask_hi[f], raw_hi);
    }
  }
}

TEST(ScoreDetectionTest, Identity) {
  FreezeTimeline t;
  t.frame_count = 100;
  t.events = {{2, 3}, {10, 4}, {30, 2}, {60, 9}};
  const DetectionReport r = score_detection(t, t);
  EXPECT_EQ(r.detection_rate, 1.0);
  EXPECT_EQ(r.false_alarm_rate, 0.0);
}

TEST(ScoreDetectionTest, HalfOverlapBoundary) {
  FreezeTimeline truth, found;
  truth.frame_count = found.frame_count = 50;
  truth.events = {{10, 4}};
  found.events = {{12, 5}};  // covers frames 12, 13: exactly half
  EXPECT_EQ(score_detection(found, truth).correctly_detected, 1u);
  found.events = {{13, 5}};  // one frame: less than half
  const DetectionReport r = score_detection(found, truth);
  EXPECT_EQ(r.correctly_detected, 0u);
  EXPECT_EQ(r.false_alarms, 0u);  // overlaps, so not a false alarm
}

TEST(ScoreDetectionTest, EmptyFound) {
  FreezeTimeline truth, found;
  truth.frame_count = found.frame_count = 50;
  truth.events = {{10, 4}};
  const DetectionReport r = score_detection(found, truth);
  EXPECT_EQ(r.detection_rate, 0.0);
  EXPECT_EQ(r.false_alarm_rate, 0.0);
}

TEST(ScoreDetectionTest, FrameCountMismatchThrows) {
  FreezeTimeline a, b;
  a.frame_count = 10;
  b.frame_count = 11;
  EXPECT_THROW(score_detection(a, b), ShapeError);
}

TEST(ScoreDetectionTest, DetectsInjectedFreezesOnCleanMotion) {
  Rng rng(6);
  SynthConfig cfg;
  cfg.frames = 120;
  cfg.width = 32;
  cfg.height = 32;
  const VideoSequence src = synth_gradient(cfg);
  for (FreezeKind kind : {FreezeKind::kLoss, FreezeKind::kDelay}) {
    for (int trial = 0; trial < 10; ++trial) {
      const FreezePlan plan = random_plan(rng, kind, src.frame_count(), 4, 2, 12);
      const DegradedVideo d = inject(src, plan);
      const FreezeTimeline found = detect_freezes(compute_series(d.video));
      const DetectionReport r = score_detection(found, d.truth);
      EXPECT_EQ(r.detection_rate, d.truth.events.empty() ? 0.0 : 1.0);
      EXPECT_EQ(r.false_alarm_rate, 0.0);
      EXPECT_EQ(found.events, d.truth.events);
    }
  }
}

TEST(TimelineJsonTest, ParsesTruthFile) {
  const auto events = events_from_json(R"([{"start":3,"duration":2},{"start":9,"duration":4}])");
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[1], (FreezeEvent{9, 4}));
  EXPECT_EQ(events_from_json(events_to_json(events)), events);
  EXPECT_THROW(events_from_json("{}"), ParseError);
  EXPECT_THROW(events_from_json(R"([{"start":-1,"duration":2}])"), ParseError);
}

}  // namespace
}  // namespace jerkmeter
