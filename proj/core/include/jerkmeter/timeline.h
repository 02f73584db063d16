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
#ifndef JERKMETER_TIMELINE_H_
#define JERKMETER_TIMELINE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace jerkmeter {

// A run of frames that repeat their predecessor. Frame `start` is the first
// duplicate; frames [start, start + duration) are frozen.
struct FreezeEvent {
  std::size_t start = 0;
  std::size_t duration = 0;

  std::size_t end() const { return start + duration; }  // one past the last
  std::size_t last() const { return start + duration - 1; }
  bool contains(std::size_t frame) const {
    return frame >= start && frame < end();
  }

  friend bool operator==(const FreezeEvent&, const FreezeEvent&) = default;
};

inline constexpr std::size_t kMinFreezeDuration = 2;

struct FreezeTimeline {
  std::vector<FreezeEvent> events;
  std::size_t frame_count = 0;
  double fps = 0.0;

  // Sorted, separated by at least one unfrozen frame, duration >= 2, start
  // >= 1 and inside [1, frame_count). Throws ShapeError otherwise.
  void validate() const;

  std::vector<bool> frozen_mask() const;
  std::size_t frozen_frames() const;

  friend bool operator==(const FreezeTimeline&, const FreezeTimeline&) =
      default;
};

// Truth-file format: a JSON array of {"start": n, "duration": n}.
std::string events_to_json(const std::vector<FreezeEvent>& events);
std::vector<FreezeEvent> events_from_json(std::string_view text);

}  // namespace jerkmeter

#endif  // JERKMETER_TIMELINE_H_
