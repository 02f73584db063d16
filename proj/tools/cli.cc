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
#include "cli.h"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "jerkmeter/dataset.h"
#include "jerkmeter/degradation.h"
#include "jerkmeter/errors.h"
#include "jerkmeter/eval_metrics.h"
#include "jerkmeter/features.h"
#include "jerkmeter/frame_analysis.h"
#include "jerkmeter/freeze_detection.h"
#include "jerkmeter/quality_model.h"
#include "jerkmeter/training.h"
#include "jerkmeter/video_io.h"

namespace jerkmeter::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = 0;
  bool json = false;
};

struct InputOptions {
  std::string path;
  bool raw = false;
  std::string size;
  std::string fps = "25:1";
  std::string chroma = "420";
};

struct DetectOptions {
  double eps = DetectorConfig{}.epsilon_abs;
  double rel = DetectorConfig{}.rel_factor;

  DetectorConfig config() const {
    DetectorConfig c{eps, rel};
    c.validate();
    return c;
  }
};

std::pair<int, int> parse_size(const std::string& text, const char* flag) {
  const auto x = text.find('x');
  int w = 0, h = 0;
  auto parse = [](std::string_view s, int& v) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && ec == std::errc() && p == s.data() + s.size() && v > 0;
  };
  if (x == std::string::npos || !parse(std::string_view(text).substr(0, x), w) ||
      !parse(std::string_view(text).substr(x + 1), h))
    throw ValidationError(std::string(flag) + " must look like WIDTHxHEIGHT");
  return {w, h};
}

std::pair<int, int> parse_rate(const std::string& text) {
  const auto colon = text.find(':');
  int num = 0, den = 1;
  auto parse = [](std::string_view s, int& v) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && ec == std::errc() && p == s.data() + s.size() && v > 0;
  };
  const std::string_view sv(text);
  const bool ok = colon == std::string::npos
                      ? parse(sv, num)
                      : parse(sv.substr(0, colon), num) &&
                            parse(sv.substr(colon + 1), den);
  if (!ok) throw ValidationError("--fps must be N or NUM:DEN");
  return {num, den};
}

bool looks_raw(const InputOptions& in) {
  if (in.raw) return true;
  const std::string ext = std::filesystem::path(in.path).extension().string();
  return ext == ".yuv" || ext == ".raw";
}

// Validates flags; returns the raw header when the input is headerless.
std::optional<VideoHeader> validate_input(const InputOptions& in) {
  if (!looks_raw(in)) return std::nullopt;
  if (in.size.empty())
    throw ValidationError("raw YUV input requires --size WIDTHxHEIGHT");
  VideoHeader h;
  std::tie(h.width, h.height) = parse_size(in.size, "--size");
  std::tie(h.fps_num, h.fps_den) = parse_rate(in.fps);
  try {
    h.chroma = parse_chroma_tag(in.chroma);
    h.validate();
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
  return h;
}

struct OpenVideo {
  std::ifstream file;
  std::unique_ptr<FrameSource> source;
};

std::unique_ptr<OpenVideo> open_video(const InputOptions& in,
                                      const std::optional<VideoHeader>& raw) {
  auto v = std::make_unique<OpenVideo>();
  v->file.open(in.path, std::ios::binary);
  if (!v->file) throw IoError("cannot open '" + in.path + "'");
  if (raw)
    v->source = std::make_unique<RawYuvReader>(v->file, *raw);
  else
    v->source = std::make_unique<Y4mReader>(v->file);
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot create '" + path + "'");
  f << bytes;
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

Json events_json(const std::vector<FreezeEvent>& events) {
  Json arr = Json::array();
  for (const auto& e : events)
    arr.push_back({{"start", e.start}, {"duration", e.duration}});
  return arr;
}

Json features_json(const FeatureVector& fv) {
  Json obj = Json::object();
  for (Feature f : all_features()) obj[std::string(feature_name(f))] = fv[f];
  return obj;
}

Json report_json(const DetectionReport& r) {
  return {{"total_true", r.total_true},
          {"correctly_detected", r.correctly_detected},
          {"detection_rate", r.detection_rate},
          {"found", r.found},
          {"false_alarms", r.false_alarms},
          {"false_alarm_rate", r.false_alarm_rate}};
}

Json with_schema() { return Json{{"schema", kSchemaVersion}}; }

void emit(std::ostream& out, const Json& doc) { out << doc.dump(2) << '\n'; }

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

void print_events(std::ostream& out, const std::vector<FreezeEvent>& events) {
  out << "freeze events: " << events.size() << '\n';
  for (const auto& e : events)
    out << "  start " << std::setw(6) << e.start << "  duration "
        << std::setw(4) << e.duration << '\n';
}

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("input", in.path, "Y4M file, or raw planar YUV with --raw")
      ->required();
  cmd->add_flag("--raw", in.raw, "treat input as headerless planar YUV");
  cmd->add_option("--size", in.size, "raw YUV frame size, WIDTHxHEIGHT");
  cmd->add_option("--fps", in.fps, "raw YUV frame rate, N or NUM:DEN");
  cmd->add_option("--chroma", in.chroma, "raw YUV chroma: 420, 422, 444, mono");
}

void add_detect_options(CLI::App* cmd, DetectOptions& d) {
  cmd->add_option("--eps", d.eps, "absolute freeze threshold (FD units)");
  cmd->add_option("--rel", d.rel, "threshold factor on the median active FD");
}

QualityModel load_model_or_default(const std::string& path) {
  if (path.empty()) return default_model();
  return load_model(read_file(path));
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = std::string_view(text).substr(pos, comma - pos);
    int v = 0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || p != item.data() + item.size())
      throw ValidationError(std::string(flag) +
                            " must be a comma-separated integer list");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"jerkmeter: no-reference frame-freeze jerkiness meter"};
  app.name(args.empty() ? "jerkmeter" : args[0]);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "random seed");
  app.add_option("--threads", global.threads,
                 "worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--json", global.json, "machine-readable JSON on stdout");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic source clip");
  std::string pattern = "gradient";
  SynthConfig synth_cfg;
  std::string synth_size = "64x64";
  std::string synth_fps = "25:1";
  std::string synth_out;
  synth->add_option("--pattern", pattern, "source pattern")
      ->check(CLI::IsMember({"gradient"}));
  synth->add_option("--frames", synth_cfg.frames, "frame count");
  synth->add_option("--size", synth_size, "WIDTHxHEIGHT");
  synth->add_option("--fps", synth_fps, "N or NUM:DEN");
  synth->add_option("--noise", synth_cfg.noise, "per-pixel noise sigma")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--speed", synth_cfg.speed, "pixels per frame")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--out", synth_out, "output Y4M path")->required();

  // degrade
  auto* degrade = app.add_subcommand("degrade", "inject freezes");
  InputOptions degrade_in;
  std::string kind_text, events_text, degrade_out, truth_out;
  add_input_options(degrade, degrade_in);
  degrade->add_option("--kind", kind_text, "loss or delay")
      ->required()
      ->check(CLI::IsMember({"loss", "delay"}));
  degrade->add_option("--events", events_text, "start:duration[,...]")
      ->required();
  degrade->add_option("--out", degrade_out, "degraded Y4M path")->required();
  degrade->add_option("--truth", truth_out, "ground-truth JSON path");

  // fd
  auto* fd = app.add_subcommand("fd", "frame-difference series");
  InputOptions fd_in;
  add_input_options(fd, fd_in);

  // detect
  auto* detect = app.add_subcommand("detect", "detect freeze events");
  InputOptions detect_in;
  DetectOptions detect_opts;
  std::string truth_in;
  add_input_options(detect, detect_in);
  add_detect_options(detect, detect_opts);
  detect->add_option("--truth", truth_in, "ground-truth JSON to score against");

  // features
  auto* features = app.add_subcommand("features", "13 freeze features");
  InputOptions features_in;
  DetectOptions features_opts;
  add_input_options(features, features_in);
  add_detect_options(features, features_opts);

  // score
  auto* score_cmd = app.add_subcommand("score", "predict DMOS for a clip");
  InputOptions score_in;
  DetectOptions score_opts;
  std::string score_model;
  add_input_options(score_cmd, score_in);
  add_detect_options(score_cmd, score_opts);
  score_cmd->add_option("--model", score_model,
                        "model JSON (default: built-in reference weights)");

  // train
  auto* train = app.add_subcommand("train", "feature/structure search");
  std::string train_data, train_out, train_ranking;
  std::string subset_sizes = "4,5,6,7", hidden = "1,2,3,4";
  SearchConfig search;
  DetectOptions train_opts;
  bool grouped = false;
  train->add_option("--data", train_data, "sample CSV")->required();
  train->add_option("--subset-sizes", subset_sizes, "candidate feature counts");
  train->add_option("--hidden", hidden, "candidate hidden node counts");
  train->add_option("--folds", search.folds, "cross-validation folds");
  train->add_option("--cap", search.sample_count_cap,
                    "weights must be strictly fewer than this");
  train->add_option("--restarts", search.lm.restarts, "LM restarts per fit");
  train->add_option("--max-iters", search.lm.max_iters, "LM iteration limit");
  train->add_flag("--grouped", grouped, "keep each source_id in one fold");
  train->add_option("--out", train_out, "model JSON output")->required();
  train->add_option("--ranking", train_ranking, "ranking CSV output");
  add_detect_options(train, train_opts);

  // eval
  auto* eval = app.add_subcommand("eval", "PCC / SROCC / rRMSE on a table");
  std::string eval_data, eval_model;
  std::optional<double> scale_range;
  DetectOptions eval_opts;
  eval->add_option("--data", eval_data, "sample CSV")->required();
  eval->add_option("--model", eval_model, "model JSON (default: built-in)");
  eval->add_option("--scale-range", scale_range,
                   "rRMSE normalizer (default: observed DMOS range)");
  add_detect_options(eval, eval_opts);

  try {
    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1),
                                  args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (*synth) {
      std::tie(synth_cfg.width, synth_cfg.height) =
          parse_size(synth_size, "--size");
      std::tie(synth_cfg.fps_num, synth_cfg.fps_den) = parse_rate(synth_fps);
      synth_cfg.seed = global.seed;
      VideoSequence seq;
      try {
        seq = synth_gradient(synth_cfg);
      } catch (const ShapeError& e) {
        throw ValidationError(e.what());
      } catch (const UnsupportedFormat& e) {
        throw ValidationError(e.what());
      }
      write_file(synth_out, write_y4m(seq));
      if (global.json) {
        Json doc = with_schema();
        doc["out"] = synth_out;
        doc["frames"] = seq.frame_count();
        doc["width"] = seq.header.width;
        doc["height"] = seq.header.height;
        emit(out, doc);
      } else {
        out << "wrote " << seq.frame_count() << " frames to " << synth_out
            << '\n';
      }
      return kExitOk;
    }

    if (*degrade) {
      const auto raw = validate_input(degrade_in);
      FreezePlan plan;
      plan.kind = parse_freeze_kind(kind_text);
      plan.events = parse_event_list(events_text);
      auto video = open_video(degrade_in, raw);
      const VideoSequence seq = read_all(*video->source);
      const DegradedVideo result = inject(seq, plan);
      write_file(degrade_out, write_y4m(result.video));
      if (!truth_out.empty())
        write_file(truth_out, events_to_json(result.truth.events) + "\n");
      if (global.json) {
        Json doc = with_schema();
        doc["kind"] = kind_text;
        doc["frame_count"] = result.truth.frame_count;
        doc["events"] = events_json(result.truth.events);
        emit(out, doc);
      } else {
        out << "wrote " << degrade_out << '\n';
        print_events(out, result.truth.events);
      }
      return kExitOk;
    }

    if (*fd) {
      const auto raw = validate_input(fd_in);
      auto video = open_video(fd_in, raw);
      const FrameDiffSeries series = compute_series(*video->source);
      if (global.json) {
        Json doc = with_schema();
        doc["frame_count"] = series.frame_count();
        Json records = Json::array();
        for (std::size_t i = 0; i < series.size(); ++i)
          records.push_back({{"index", i},
                             {"fd", series.values[i]},
                             {"scene_cut", static_cast<bool>(series.scene_cut[i])}});
        doc["series"] = records;
        emit(out, doc);
      } else {
        out << "index        fd  scene_cut\n";
        for (std::size_t i = 0; i < series.size(); ++i)
          out << std::setw(5) << i << ' ' << std::setw(10) << fmt(series.values[i])
              << "  " << (series.scene_cut[i] ? "yes" : "") << '\n';
      }
      return kExitOk;
    }

    if (*detect) {
      const auto raw = validate_input(detect_in);
      const DetectorConfig cfg = detect_opts.config();
      auto video = open_video(detect_in, raw);
      const FrameDiffSeries series = compute_series(*video->source);
      const FreezeTimeline found =
          detect_freezes(series, cfg, video->source->header().fps());
      std::optional<DetectionReport> report;
      if (!truth_in.empty()) {
        FreezeTimeline truth;
        truth.events = events_from_json(read_file(truth_in));
        truth.frame_count = found.frame_count;
        truth.validate();
        report = score_detection(found, truth);
      }
      if (global.json) {
        Json doc = with_schema();
        doc["frame_count"] = found.frame_count;
        doc["threshold"] = detection_threshold(series.values, cfg);
        doc["events"] = events_json(found.events);
        if (report) doc["report"] = report_json(*report);
        emit(out, doc);
      } else {
        print_events(out, found.events);
        if (report)
          out << "detection rate " << fmt(100 * report->detection_rate, 4)
              << "%  false alarm rate " << fmt(100 * report->false_alarm_rate, 4)
              << "%\n";
      }
      return kExitOk;
    }

    if (*features) {
      const auto raw = validate_input(features_in);
      const DetectorConfig cfg = features_opts.config();
      auto video = open_video(features_in, raw);
      const Analysis a = analyze(*video->source, cfg);
      if (global.json) {
        Json doc = with_schema();
        const Json values = features_json(a.features);
        for (const auto& [k, v] : values.items()) doc[k] = v;
        doc["frame_count"] = a.timeline.frame_count;
        doc["fps"] = a.timeline.fps;
        emit(out, doc);
      } else {
        for (Feature f : all_features())
          out << std::left << std::setw(10) << feature_name(f) << std::right
              << ' ' << fmt(a.features[f]) << '\n';
      }
      return kExitOk;
    }

    if (*score_cmd) {
      const auto raw = validate_input(score_in);
      const DetectorConfig cfg = score_opts.config();
      const QualityModel model = load_model_or_default(score_model);
      auto video = open_video(score_in, raw);
      const Analysis a = analyze(*video->source, cfg);
      const QualityScore s = score(a.features, model);
      if (global.json) {
        Json doc = with_schema();
        doc["dmos_pred"] = s.dmos_pred;
        doc["calibrated"] = model.meta.calibrated;
        doc["features"] = features_json(a.features);
        doc["events"] = events_json(a.timeline.events);
        emit(out, doc);
      } else {
        out << "predicted DMOS " << fmt(s.dmos_pred)
            << (model.meta.calibrated ? "" : " (uncalibrated)") << '\n';
        print_events(out, a.timeline.events);
      }
      return kExitOk;
    }

    if (*train) {
      search.hidden_range = parse_int_list(hidden, "--hidden");
      search.subset_sizes = parse_int_list(subset_sizes, "--subset-sizes");
      search.seed = global.seed;
      search.threads = global.threads;
      search.fold_mode = grouped ? FoldMode::kGroupedBySource
                                 : FoldMode::kShuffled;
      search.validate();
      const DetectorConfig cfg = train_opts.config();
      const std::vector<TrainingSample> samples =
          load_samples_csv(train_data, cfg);
      if (samples.size() < static_cast<std::size_t>(search.folds))
        throw ValidationError("sample table has " +
                              std::to_string(samples.size()) +
                              " rows, fewer than --folds");
      const SearchResult result = exhaustive_search(samples, search);
      write_file(train_out, save_model(result.model));
      if (!train_ranking.empty())
        write_file(train_ranking, ranking_to_csv(result.ranking));
      const Candidate& best = result.ranking.front();
      if (global.json) {
        Json doc = with_schema();
        doc["samples"] = samples.size();
        doc["evaluated"] = result.evaluated;
        Json names = Json::array();
        for (Feature f : best.features) names.push_back(feature_name(f));
        doc["best"] = {{"features", names},
                       {"hidden", best.hidden},
                       {"cv_error", best.cv_error}};
        doc["model"] = train_out;
        emit(out, doc);
      } else {
        out << "evaluated " << result.evaluated << " candidates; best: M="
            << best.hidden << " features=";
        for (std::size_t j = 0; j < best.features.size(); ++j)
          out << (j ? "," : "") << feature_name(best.features[j]);
        out << " cv_mse=" << fmt(best.cv_error) << '\n';
      }
      return kExitOk;
    }

    if (*eval) {
      const DetectorConfig cfg = eval_opts.config();
      if (scale_range && !(*scale_range > 0.0))
        throw ValidationError("--scale-range must be positive");
      const QualityModel model = load_model_or_default(eval_model);
      const std::vector<TrainingSample> samples =
          load_samples_csv(eval_data, cfg);
      std::vector<double> pred, dmos;
      for (const auto& s : samples) {
        pred.push_back(score(s.features, model).dmos_pred);
        dmos.push_back(s.dmos);
      }
      const EvalReport r = evaluate(pred, dmos, scale_range);
      if (global.json) {
        Json doc = with_schema();
        doc["pcc"] = r.pcc;
        doc["srocc"] = r.srocc;
        doc["rrmse"] = r.rrmse;
        doc["n"] = r.n;
        doc["calibrated"] = model.meta.calibrated;
        emit(out, doc);
      } else {
        out << "n=" << r.n << "  PCC " << fmt(r.pcc, 4) << "  SROCC "
            << fmt(r.srocc, 4) << "  rRMSE " << fmt(r.rrmse, 4) << "%\n";
      }
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace jerkmeter::cli
