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
#ifndef JERKMETER_VIDEO_IO_H_
#define JERKMETER_VIDEO_IO_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace jerkmeter {

enum class ChromaFormat { k420, k422, k444, kMono };

// Stream parameters. Only 8-bit sample formats are representable.
struct VideoHeader {
  int width = 0;
  int height = 0;
  int fps_num = 25;
  int fps_den = 1;
  ChromaFormat chroma = ChromaFormat::k420;

  // Y4M bookkeeping kept for byte-exact rewrites. An empty chroma_tag means
  // the source carried no C token (the container default, 4:2:0).
  std::string chroma_tag;
  std::string interlace;
  std::string aspect;
  std::vector<std::string> extensions;  // full "X..." tokens, in order

  double fps() const { return static_cast<double>(fps_num) / fps_den; }
  std::size_t luma_size() const;
  std::size_t chroma_plane_size() const;
  std::size_t frame_size() const;

  // Throws UnsupportedFormat or ShapeError when the invariants do not hold.
  void validate() const;

  friend bool operator==(const VideoHeader&, const VideoHeader&) = default;
};

struct LumaFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> samples;  // row-major, width * height

  LumaFrame() = default;
  LumaFrame(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), samples(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const {
    return samples[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return samples[static_cast<std::size_t>(y) * width + x];
  }

  friend bool operator==(const LumaFrame&, const LumaFrame&) = default;
};

// One decoded picture. Chroma is carried for container fidelity only.
struct Frame {
  LumaFrame luma;
  std::vector<std::uint8_t> chroma;  // Cb plane followed by Cr plane
  std::string params;                // text after "FRAME" on the marker line

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct VideoSequence {
  VideoHeader header;
  std::vector<Frame> frames;

  std::size_t frame_count() const { return frames.size(); }
  const LumaFrame& luma(std::size_t i) const { return frames[i].luma; }

  friend bool operator==(const VideoSequence&, const VideoSequence&) = default;
};

// Blank frame with mid-grey chroma sized for `header`.
Frame make_frame(const VideoHeader& header, std::uint8_t luma_fill = 0);

// Pull-based frame producer. read() fills a caller-owned slot so consumers
// decide how many frames stay resident.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual const VideoHeader& header() const = 0;
  // Returns false at a clean end of stream.
  virtual bool read(Frame& out) = 0;
};

class Y4mReader : public FrameSource {
 public:
  // Parses the stream header immediately; throws ParseError/UnsupportedFormat.
  explicit Y4mReader(std::istream& in);

  const VideoHeader& header() const override { return header_; }
  bool read(Frame& out) override;

 private:
  std::istream& in_;
  VideoHeader header_;
  std::size_t position_ = 0;
  std::size_t frames_read_ = 0;
};

class RawYuvReader : public FrameSource {
 public:
  RawYuvReader(std::istream& in, VideoHeader header);

  const VideoHeader& header() const override { return header_; }
  bool read(Frame& out) override;

 private:
  std::istream& in_;
  VideoHeader header_;
};

// Replays an in-memory sequence.
class SequenceSource : public FrameSource {
 public:
  explicit SequenceSource(const VideoSequence& seq) : seq_(seq) {}

  const VideoHeader& header() const override { return seq_.header; }
  bool read(Frame& out) override;

 private:
  const VideoSequence& seq_;
  std::size_t next_ = 0;
};

VideoSequence read_all(FrameSource& source);

VideoSequence parse_y4m(std::istream& in);
VideoSequence parse_y4m(std::string_view bytes);

VideoSequence parse_raw_yuv(std::istream& in, const VideoHeader& header);
VideoSequence parse_raw_yuv(std::string_view bytes, const VideoHeader& header);

void write_y4m(const VideoSequence& seq, std::ostream& out);
std::string write_y4m(const VideoSequence& seq);

// Parses a "C" token value such as "420jpeg". Throws UnsupportedFormat.
ChromaFormat parse_chroma_tag(std::string_view tag);

}  // namespace jerkmeter

#endif  // JERKMETER_VIDEO_IO_H_
