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
#include "jerkmeter/video_io.h"

#include <charconv>
#include <sstream>

#include "jerkmeter/errors.h"

namespace jerkmeter {
namespace {

constexpr std::string_view kSignature = "YUV4MPEG2";
constexpr std::string_view kFrameMarker = "FRAME";
constexpr std::size_t kMaxLineLength = 4096;

bool parse_positive(std::string_view text, int& out) {
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && out > 0;
}

// Reads up to and including '\n'. Returns false on EOF before any byte.
bool read_line(std::istream& in, std::string& line, std::size_t& position,
               bool& saw_newline) {
  line.clear();
  saw_newline = false;
  char c;
  while (in.get(c)) {
    ++position;
    if (c == '\n') {
      saw_newline = true;
      return true;
    }
    if (line.size() >= kMaxLineLength) {
      throw ParseError(position, "line exceeds " +
                                     std::to_string(kMaxLineLength) + " bytes");
    }
    line.push_back(c);
  }
  return !line.empty();
}

VideoHeader parse_header_line(std::string_view line, std::size_t line_start) {
  if (line.substr(0, kSignature.size()) != kSignature ||
      (line.size() > kSignature.size() && line[kSignature.size()] != ' ')) {
    throw ParseError(line_start, "missing YUV4MPEG2 signature");
  }
  VideoHeader header;
  bool have_w = false, have_h = false, have_f = false;
  std::size_t pos = kSignature.size();
  while (pos < line.size()) {
    if (line[pos] != ' ') throw ParseError(line_start + pos, "expected space");
    ++pos;
    const std::size_t end = std::min(line.find(' ', pos), line.size());
    const std::string_view token = line.substr(pos, end - pos);
    const std::size_t at = line_start + pos;
    if (token.empty()) throw ParseError(at, "empty parameter token");
    const std::string_view value = token.substr(1);
    switch (token[0]) {
      case 'W':
        if (!parse_positive(value, header.width))
          throw ParseError(at, "bad width token");
        have_w = true;
        break;
      case 'H':
        if (!parse_positive(value, header.height))
          throw ParseError(at, "bad height token");
        have_h = true;
        break;
      case 'F': {
        const std::size_t colon = value.find(':');
        if (colon == std::string_view::npos ||
            !parse_positive(value.substr(0, colon), header.fps_num) ||
            !parse_positive(value.substr(colon + 1), header.fps_den)) {
          throw ParseError(at, "bad frame-rate token");
        }
        have_f = true;
        break;
      }
      case 'I':
        header.interlace = std::string(value);
        break;
      case 'A':
        header.aspect = std::string(value);
        break;
      case 'C':
        header.chroma = parse_chroma_tag(value);
        header.chroma_tag = std::string(value);
        break;
      case 'X':
        header.extensions.emplace_back(token);
        break;
      default:
        throw ParseError(at, "unknown parameter token '" + std::string(token) +
                                 "'");
    }
    pos = end;
  }
  if (!have_w || !have_h) throw ParseError(line_start, "missing W or H token");
  if (!have_f) throw ParseError(line_start, "missing F token");
  header.validate();
  return header;
}

void read_payload(std::istream& in, const VideoHeader& header, Frame& out,
                  std::size_t frame_index, std::size_t& position) {
  out.luma.width = header.width;
  out.luma.height = header.height;
  out.luma.samples.resize(header.luma_size());
  out.chroma.resize(2 * header.chroma_plane_size());
  in.read(reinterpret_cast<char*>(out.luma.samples.data()),
          static_cast<std::streamsize>(out.luma.samples.size()));
  if (in.gcount() != static_cast<std::streamsize>(out.luma.samples.size()))
    throw TruncatedFrame(frame_index);
  position += out.luma.samples.size();
  if (!out.chroma.empty()) {
    in.read(reinterpret_cast<char*>(out.chroma.data()),
            static_cast<std::streamsize>(out.chroma.size()));
    if (in.gcount() != static_cast<std::streamsize>(out.chroma.size()))
      throw TruncatedFrame(frame_index);
    position += out.chroma.size();
  }
}

}  // namespace

ChromaFormat parse_chroma_tag(std::string_view tag) {
  if (tag == "420jpeg" || tag == "420paldv" || tag == "420mpeg2" ||
      tag == "420")
    return ChromaFormat::k420;
  if (tag == "422") return ChromaFormat::k422;
  if (tag == "444") return ChromaFormat::k444;
  if (tag == "mono") return ChromaFormat::kMono;
  throw UnsupportedFormat("unsupported chroma/bit-depth tag 'C" +
                          std::string(tag) + "' (8-bit 420/422/444/mono only)");
}

std::size_t VideoHeader::luma_size() const {
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

std::size_t VideoHeader::chroma_plane_size() const {
  switch (chroma) {
    case ChromaFormat::k420:
      return luma_size() / 4;
    case ChromaFormat::k422:
      return luma_size() / 2;
    case ChromaFormat::k444:
      return luma_size();
    case ChromaFormat::kMono:
      return 0;
  }
  return 0;
}

std::size_t VideoHeader::frame_size() const {
  return luma_size() + 2 * chroma_plane_size();
}

void VideoHeader::validate() const {
  if (width < 1 || height < 1)
    throw ShapeError("frame dimensions must be positive");
  if (fps_num < 1 || fps_den < 1)
    throw ShapeError("frame rate terms must be positive");
  if (chroma == ChromaFormat::k420 && (width % 2 != 0 || height % 2 != 0))
    throw UnsupportedFormat("4:2:0 requires even width and height");
  if (chroma == ChromaFormat::k422 && width % 2 != 0)
    throw UnsupportedFormat("4:2:2 requires even width");
}

Frame make_frame(const VideoHeader& header, std::uint8_t luma_fill) {
  Frame f;
  f.luma = LumaFrame(header.width, header.height, luma_fill);
  f.chroma.assign(2 * header.chroma_plane_size(), 128);
  return f;
}

Y4mReader::Y4mReader(std::istream& in) : in_(in) {
  std::string line;
  bool newline = false;
  if (!read_line(in_, line, position_, newline))
    throw ParseError(0, "empty stream");
  if (!newline) throw ParseError(position_, "header line not terminated");
  header_ = parse_header_line(line, 0);
}

bool Y4mReader::read(Frame& out) {
  const std::size_t line_start = position_;
  std::string line;
  bool newline = false;
  if (!read_line(in_, line, position_, newline)) return false;
  if (line.substr(0, kFrameMarker.size()) != kFrameMarker ||
      (line.size() > kFrameMarker.size() && line[kFrameMarker.size()] != ' ')) {
    throw ParseError(line_start, "expected FRAME marker");
  }
  if (!newline) throw TruncatedFrame(frames_read_);
  out.params = line.substr(kFrameMarker.size());
  read_payload(in_, header_, out, frames_read_, position_);
  ++frames_read_;
  return true;
}

RawYuvReader::RawYuvReader(std::istream& in, VideoHeader header)
    : in_(in), header_(std::move(header)) {
  header_.validate();
}

bool RawYuvReader::read(Frame& out) {
  const std::size_t frame_bytes = header_.frame_size();
  std::vector<std::uint8_t> buffer(frame_bytes);
  in_.read(reinterpret_cast<char*>(buffer.data()),
           static_cast<std::streamsize>(frame_bytes));
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (got == 0) return false;
  if (got != frame_bytes) throw TrailingBytes(got);
  const std::size_t luma = header_.luma_size();
  out.luma.width = header_.width;
  out.luma.height = header_.height;
  out.luma.samples.assign(buffer.begin(), buffer.begin() + luma);
  out.chroma.assign(buffer.begin() + luma, buffer.end());
  out.params.clear();
  return true;
}

bool SequenceSource::read(Frame& out) {
  if (next_ >= seq_.frames.size()) return false;
  out = seq_.frames[next_++];
  return true;
}

VideoSequence read_all(FrameSource& source) {
  VideoSequence seq;
  seq.header = source.header();
  Frame frame;
  while (source.read(frame)) seq.frames.push_back(frame);
  return seq;
}

VideoSequence parse_y4m(std::istream& in) {
  Y4mReader reader(in);
  return read_all(reader);
}

VideoSequence parse_y4m(std::string_view bytes) {
  std::istringstream in{std::string(bytes)};
  return parse_y4m(in);
}

VideoSequence parse_raw_yuv(std::istream& in, const VideoHeader& header) {
  RawYuvReader reader(in, header);
  return read_all(reader);
}

VideoSequence parse_raw_yuv(std::string_view bytes, const VideoHeader& header) {
  header.validate();
  const std::size_t frame_bytes = header.frame_size();
  if (bytes.size() % frame_bytes != 0)
    throw TrailingBytes(bytes.size() % frame_bytes);
  std::istringstream in{std::string(bytes)};
  return parse_raw_yuv(in, header);
}

void write_y4m(const VideoSequence& seq, std::ostream& out) {
  const VideoHeader& h = seq.header;
  h.validate();
  out << kSignature << " W" << h.width << " H" << h.height << " F" << h.fps_num
      << ':' << h.fps_den;
  if (!h.interlace.empty()) out << " I" << h.interlace;
  if (!h.aspect.empty()) out << " A" << h.aspect;
  if (!h.chroma_tag.empty()) out << " C" << h.chroma_tag;
  for (const auto& x : h.extensions) out << ' ' << x;
  out << '\n';
  const std::size_t chroma_bytes = 2 * h.chroma_plane_size();
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const Frame& f = seq.frames[i];
    if (f.luma.width != h.width || f.luma.height != h.height ||
        f.luma.samples.size() != h.luma_size() ||
        f.chroma.size() != chroma_bytes) {
      throw ShapeError("frame " + std::to_string(i) +
                       " does not match the header geometry");
    }
    out << kFrameMarker << f.params << '\n';
    out.write(reinterpret_cast<const char*>(f.luma.samples.data()),
              static_cast<std::streamsize>(f.luma.samples.size()));
    out.write(reinterpret_cast<const char*>(f.chroma.data()),
              static_cast<std::streamsize>(f.chroma.size()));
  }
  out.flush();
  if (!out) throw IoError("failed writing Y4M stream");
}

std::string write_y4m(const VideoSequence& seq) {
  std::ostringstream out;
  write_y4m(seq, out);
  return std::move(out).str();
}

}  // namespace jerkmeter
