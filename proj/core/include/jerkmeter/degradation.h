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
#ifndef JERKMETER_DEGRADATION_H_
#define JERKMETER_DEGRADATION_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "jerkmeter/random.h"
#include "jerkmeter/timeline.h"
#include "jerkmeter/video_io.h"

namespace jerkmeter {

enum class FreezeKind { kLoss, kDelay };

// Event starts are in source-frame coordinates. For loss freezes they are
// also the output positions; for delay freezes the output position shifts by
// the duplicates inserted by earlier events.
struct FreezePlan {
  FreezeKind kind = FreezeKind::kLoss;
  std::vector<FreezeEvent> events;
};

struct DegradedVideo {
  VideoSequence video;
  FreezeTimeline truth;
};

// Frames [start, start + duration) are replaced by frame start - 1 and
// playback resumes at frame start + duration. Throws PlanError.
DegradedVideo inject_loss_freeze(const VideoSequence& seq,
                                 const FreezePlan& plan);

// `duration` copies of frame start - 1 are inserted before frame start and
// the tail is truncated to keep the length. Throws PlanError.
DegradedVideo inject_delay_freeze(const VideoSequence& seq,
                                  const FreezePlan& plan);

DegradedVideo inject(const VideoSequence& seq, const FreezePlan& plan);

// "3:3,40:7" -> {{3,3},{40,7}}. Throws ValidationError.
std::vector<FreezeEvent> parse_event_list(std::string_view text);

FreezeKind parse_freeze_kind(std::string_view text);

struct SynthConfig {
  std::size_t frames = 300;
  int width = 64;
  int height = 64;
  int fps_num = 25;
  int fps_den = 1;
  int speed = 1;        // pattern shift per frame, pixels
  double noise = 0.0;   // per-pixel Gaussian sigma, luma codes
  std::uint64_t seed = 0;
};

// Diagonal triangle-wave luma ramp translating by `speed` pixels per frame.
// Every one-frame step changes each pixel by exactly +-speed (before noise),
// and the pattern does not repeat within 510 / speed frames.
VideoSequence synth_gradient(const SynthConfig& config);

// Adds rounded Gaussian noise of the given sigma to every luma sample,
// independently per frame. Models capture noise on duplicated frames.
void add_capture_noise(VideoSequence& seq, double sigma, std::uint64_t seed);

// Random valid plan: events separated by >= 1 frame, durations in
// [min_duration, max_duration].
FreezePlan random_plan(Rng& rng, FreezeKind kind, std::size_t frame_count,
                       std::size_t max_events, std::size_t min_duration,
                       std::size_t max_duration);

}  // namespace jerkmeter

#endif  // JERKMETER_DEGRADATION_H_
