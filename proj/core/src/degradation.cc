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
#include "jerkmeter/degradation.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "jerkmeter/errors.h"

namespace jerkmeter {
namespace {

constexpr int kTrianglePeriod = 510;

void check_plan_shape(const FreezePlan& plan, std::size_t frame_count) {
  for (std::size_t i = 0; i < plan.events.size(); ++i) {
    const FreezeEvent& e = plan.events[i];
    const std::string which = "event " + std::to_string(i);
    if (e.duration < kMinFreezeDuration)
      throw PlanError(which + ": duration must be at least 2");
    if (e.start < 1) throw PlanError(which + ": cannot start at frame 0");
    if (e.start >= frame_count)
      throw PlanError(which + ": starts past the last frame");
    if (i > 0 && plan.events[i - 1].start >= e.start)
      throw PlanError(which + ": starts must be strictly increasing");
  }
}

int triangle(int u) {
  const int phase = u % kTrianglePeriod;
  return 255 - std::abs(255 - phase);
}

}  // namespace

DegradedVideo inject_loss_freeze(const VideoSequence& seq,
                                 const FreezePlan& plan) {
  const std::size_t n = seq.frame_count();
  check_plan_shape(plan, n);
  for (std::size_t i = 0; i < plan.events.size(); ++i) {
    const FreezeEvent& e = plan.events[i];
    if (e.end() > n)
      throw PlanError("event " + std::to_string(i) + " runs past the end");
    if (i > 0 && plan.events[i - 1].end() >= e.start)
      throw PlanError("events " + std::to_string(i - 1) + " and " +
                      std::to_string(i) + " overlap or touch");
  }
  DegradedVideo out;
  out.video = seq;
  for (const FreezeEvent& e : plan.events)
    for (std::size_t f = e.start; f < e.end(); ++f)
      out.video.frames[f] = seq.frames[e.start - 1];
  out.truth.events = plan.events;
  out.truth.frame_count = n;
  out.truth.fps = seq.header.fps();
  return out;
}

DegradedVideo inject_delay_freeze(const VideoSequence& seq,
                                  const FreezePlan& plan) {
  const std::size_t n = seq.frame_count();
  check_plan_shape(plan, n);
  DegradedVideo out;
  out.video.header = seq.header;
  out.truth.frame_count = n;
  out.truth.fps = seq.header.fps();
  out.video.frames.reserve(n);

  std::size_t inserted = 0;
  std::size_t next_event = 0;
  for (std::size_t src = 0; src < n && out.video.frames.size() < n; ++src) {
    if (next_event < plan.events.size() &&
        plan.events[next_event].start == src) {
      const FreezeEvent& e = plan.events[next_event++];
      const FreezeEvent shifted{e.start + inserted, e.duration};
      if (shifted.end() > n)
        throw PlanError("event " + std::to_string(next_event - 1) +
                        " no longer fits after earlier insertions");
      for (std::size_t k = 0; k < e.duration; ++k)
        out.video.frames.push_back(seq.frames[src - 1]);
      out.truth.events.push_back(shifted);
      inserted += e.duration;
    }
    if (out.video.frames.size() < n) out.video.frames.push_back(seq.frames[src]);
  }
  if (next_event != plan.events.size())
    throw PlanError("plan inserts more duplicates than the clip can hold");
  return out;
}

DegradedVideo inject(const VideoSequence& seq, const FreezePlan& plan) {
  return plan.kind == FreezeKind::kLoss ? inject_loss_freeze(seq, plan)
                                        : inject_delay_freeze(seq, plan);
}

std::vector<FreezeEvent> parse_event_list(std::string_view text) {
  std::vector<FreezeEvent> events;
  auto parse_count = [&](std::string_view s) {
    std::size_t v = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end)
      throw ValidationError("bad event list entry '" + std::string(s) + "'");
    return v;
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, comma - pos);
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos)
      throw ValidationError("event '" + std::string(item) +
                            "' must be start:duration");
    events.push_back(
        {parse_count(item.substr(0, colon)), parse_count(item.substr(colon + 1))});
    pos = comma + 1;
  }
  return events;
}

FreezeKind parse_freeze_kind(std::string_view text) {
  if (text == "loss") return FreezeKind::kLoss;
  if (text == "delay") return FreezeKind::kDelay;
  throw ValidationError("freeze kind must be 'loss' or 'delay'");
}

VideoSequence synth_gradient(const SynthConfig& config) {
  VideoSequence seq;
  seq.header.width = config.width;
  seq.header.height = config.height;
  seq.header.fps_num = config.fps_num;
  seq.header.fps_den = config.fps_den;
  seq.header.chroma = ChromaFormat::k420;
  seq.header.chroma_tag = "420jpeg";
  seq.header.validate();
  if (config.speed < 0) throw ValidationError("speed must be non-negative");
  seq.frames.reserve(config.frames);
  for (std::size_t t = 0; t < config.frames; ++t) {
    Frame f = make_frame(seq.header);
    const int shift = static_cast<int>((t * static_cast<std::size_t>(
                                            config.speed)) %
                                       kTrianglePeriod);
    for (int y = 0; y < config.height; ++y)
      for (int x = 0; x < config.width; ++x)
        f.luma.at(x, y) = static_cast<std::uint8_t>(triangle(x + y + shift));
    seq.frames.push_back(std::move(f));
  }
  if (config.noise > 0.0) add_capture_noise(seq, config.noise, config.seed);
  return seq;
}

void add_capture_noise(VideoSequence& seq, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ValidationError("noise sigma must be >= 0");
  if (sigma == 0.0) return;
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    Rng rng(derive_seed(seed, i));
    for (auto& s : seq.frames[i].luma.samples) {
      const double v = static_cast<double>(s) + std::round(sigma * rng.normal());
      s = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
  }
}

FreezePlan random_plan(Rng& rng, FreezeKind kind, std::size_t frame_count,
                       std::size_t max_events, std::size_t min_duration,
                       std::size_t max_duration) {
  FreezePlan plan;
  plan.kind = kind;
  const std::size_t wanted =
      static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(
                                                      std::max<std::size_t>(
                                                          max_events, 1))));
  // Output cursor; delay events are placed by output position, then mapped
  // back to source coordinates.
  std::size_t cursor = 1 + static_cast<std::size_t>(rng.uniform_int(0, 20));
  std::size_t inserted = 0;
  for (std::size_t k = 0; k < wanted; ++k) {
    const std::size_t d = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::int64_t>(min_duration),
        static_cast<std::int64_t>(max_duration)));
    if (cursor + d > frame_count) break;
    const std::size_t source_start =
        kind == FreezeKind::kDelay ? cursor - inserted : cursor;
    plan.events.push_back({source_start, d});
    if (kind == FreezeKind::kDelay) inserted += d;
    cursor += d + 1 + static_cast<std::size_t>(rng.uniform_int(0, 40));
  }
  return plan;
}

}  // namespace jerkmeter
