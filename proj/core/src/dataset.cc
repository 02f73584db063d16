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
#include "jerkmeter/dataset.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include "jerkmeter/errors.h"
#include "jerkmeter/features.h"
#include "jerkmeter/video_io.h"

namespace jerkmeter {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    cells.push_back(trim(std::string_view(line).substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return cells;
}

double parse_number(const std::string& cell, std::size_t line_no,
                    const std::string& column) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ParseError(line_no,
                     "column '" + column + "': bad number '" + cell + "'",
                     "line");
  return v;
}

}  // namespace

std::vector<TrainingSample> read_samples_csv(
    std::istream& in, const std::filesystem::path& base_dir,
    const DetectorConfig& detector) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(0, "empty sample table", "line");
  const std::vector<std::string> header = split_row(line);
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  for (const char* required : {"id", "source_id", "dmos"})
    if (!column.count(required))
      throw ParseError(line_no,
                       std::string("missing column '") + required + "'",
                       "line");
  const bool has_video = column.count("video") > 0;
  bool has_features = true;
  for (Feature f : all_features())
    if (!column.count(std::string(feature_name(f)))) has_features = false;
  if (!has_video && !has_features)
    throw ParseError(line_no,
                     "need a 'video' column or all 13 feature columns", "line");

  std::vector<TrainingSample> samples;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    if (cells.size() != header.size())
      throw ParseError(line_no,
                       "expected " + std::to_string(header.size()) +
                           " cells, got " + std::to_string(cells.size()),
                       "line");
    TrainingSample s;
    s.id = cells[column["id"]];
    s.source_id = cells[column["source_id"]];
    s.dmos = parse_number(cells[column["dmos"]], line_no, "dmos");
    const std::string video = has_video ? cells[column["video"]] : "";
    if (!video.empty()) {
      const std::filesystem::path path = base_dir / video;
      std::ifstream file(path, std::ios::binary);
      if (!file) throw IoError("cannot open video '" + path.string() + "'");
      Y4mReader reader(file);
      s.features = analyze(reader, detector).features;
    } else if (has_features) {
      for (Feature f : all_features()) {
        const std::string name(feature_name(f));
        s.features[f] = parse_number(cells[column[name]], line_no, name);
      }
    } else {
      throw ParseError(line_no, "row has neither a video nor features", "line");
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<TrainingSample> load_samples_csv(
    const std::filesystem::path& path, const DetectorConfig& detector) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sample table '" + path.string() + "'");
  return read_samples_csv(in, path.parent_path(), detector);
}

void write_samples_csv(std::span<const TrainingSample> samples,
                       std::ostream& out) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "id,source_id,dmos";
  for (Feature f : all_features()) out << ',' << feature_name(f);
  out << '\n';
  for (const TrainingSample& s : samples) {
    out << s.id << ',' << s.source_id << ',' << num(s.dmos);
    for (Feature f : all_features()) out << ',' << num(s.features[f]);
    out << '\n';
  }
  if (!out) throw IoError("failed writing sample table");
}

}  // namespace jerkmeter
