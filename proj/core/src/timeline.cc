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
#include "jerkmeter/timeline.h"

#include <nlohmann/json.hpp>

#include "jerkmeter/errors.h"

namespace jerkmeter {

void FreezeTimeline::validate() const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    const FreezeEvent& e = events[i];
    if (e.duration < kMinFreezeDuration)
      throw ShapeError("freeze event " + std::to_string(i) +
                       " shorter than 2 frames");
    if (e.start < 1)
      throw ShapeError("freeze event cannot start at frame 0");
    if (e.end() > frame_count)
      throw ShapeError("freeze event " + std::to_string(i) +
                       " runs past the last frame");
    if (i > 0 && events[i - 1].end() >= e.start)
      throw ShapeError("freeze events " + std::to_string(i - 1) + " and " +
                       std::to_string(i) + " overlap or touch");
  }
}

std::vector<bool> FreezeTimeline::frozen_mask() const {
  std::vector<bool> mask(frame_count, false);
  for (const FreezeEvent& e : events)
    for (std::size_t f = e.start; f < e.end() && f < frame_count; ++f)
      mask[f] = true;
  return mask;
}

std::size_t FreezeTimeline::frozen_frames() const {
  std::size_t total = 0;
  for (const FreezeEvent& e : events) total += e.duration;
  return total;
}

std::string events_to_json(const std::vector<FreezeEvent>& events) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const FreezeEvent& e : events)
    arr.push_back({{"start", e.start}, {"duration", e.duration}});
  return arr.dump();
}

std::vector<FreezeEvent> events_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("truth JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError(0, "truth JSON must be an array");
  std::vector<FreezeEvent> events;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("start") ||
        !item.contains("duration") || !item["start"].is_number_unsigned() ||
        !item["duration"].is_number_unsigned()) {
      throw ParseError(0, "truth entries need non-negative integer start and "
                          "duration");
    }
    events.push_back({item["start"].get<std::size_t>(),
                      item["duration"].get<std::size_t>()});
  }
  return events;
}

}  // namespace jerkmeter
