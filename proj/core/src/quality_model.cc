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
#include "jerkmeter/quality_model.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "jerkmeter/errors.h"

namespace jerkmeter {
namespace {

using Json = nlohmann::ordered_json;

std::vector<double> number_array(const Json& node, const std::string& field) {
  if (!node.is_array()) throw ModelFormatError(field, "expected an array");
  std::vector<double> out;
  for (const auto& v : node) {
    if (!v.is_number()) throw ModelFormatError(field, "expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

const Json& require(const Json& node, const char* key,
                    const std::string& field) {
  if (!node.is_object() || !node.contains(key))
    throw ModelFormatError(field, "missing");
  return node.at(key);
}

}  // namespace

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void QualityModel::validate() const {
  const std::size_t n = features.size();
  if (n == 0) throw InvalidModel("model selects no features");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (features[i] == features[j])
        throw InvalidModel("feature " +
                           std::string(feature_name(features[i])) +
                           " selected twice");
  if (norm_mean.size() != n || norm_std.size() != n)
    throw InvalidModel("normalization arity does not match feature count");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(norm_mean[j]))
      throw InvalidModel("non-finite normalization mean");
    if (!(norm_std[j] > 0.0) || !std::isfinite(norm_std[j]))
      throw InvalidModel("normalization std must be positive for " +
                         std::string(feature_name(features[j])));
  }
  if (hidden.empty()) throw InvalidModel("model has no hidden units");
  for (const auto& row : hidden) {
    if (row.size() != n + 1)
      throw InvalidModel("hidden row length must be feature count + 1");
    for (double w : row)
      if (!std::isfinite(w)) throw InvalidModel("non-finite hidden weight");
  }
  if (output.size() != hidden.size() + 1)
    throw InvalidModel("output length must be hidden count + 1");
  for (double w : output)
    if (!std::isfinite(w)) throw InvalidModel("non-finite output weight");
}

std::vector<double> normalize(const FeatureVector& fv,
                              const QualityModel& model) {
  std::vector<double> z(model.features.size());
  for (std::size_t j = 0; j < z.size(); ++j)
    z[j] = (fv[model.features[j]] - model.norm_mean[j]) / model.norm_std[j];
  return z;
}

QualityScore predict(std::span<const double> x, const QualityModel& model) {
  const std::size_t n = model.input_count();
  if (x.size() != n)
    throw ShapeError("predict: expected " + std::to_string(n) +
                     " inputs, got " + std::to_string(x.size()));
  const std::size_t m = model.hidden_count();
  double out = model.output[m];
  for (std::size_t u = 0; u < m; ++u) {
    const auto& row = model.hidden[u];
    double t = row[n];
    for (std::size_t j = 0; j < n; ++j) t += row[j] * x[j];
    out += model.output[u] * sigmoid(t);
  }
  return {out};
}

QualityScore score(const FeatureVector& fv, const QualityModel& model) {
  const std::vector<double> z = normalize(fv, model);
  return predict(z, model);
}

QualityModel default_model() {
  QualityModel m;
  m.features = {Feature::kAvgFzDist, Feature::kNumFz,     Feature::kRDurDist,
                Feature::kRFD,       Feature::kStdFzDist, Feature::kRLenFz};
  m.norm_mean.assign(6, 0.0);
  m.norm_std.assign(6, 1.0);
  m.hidden = {
      {-0.5236, 2.8352, -0.6619, 2.2123, -0.2637, -0.3205, 3.1631},
      {5.6230, -4.7354, 2.1113, -2.6986, -1.9342, 6.0606, 1.8050},
      {1.6702, -0.8454, 1.8230, -2.4986, 1.5318, -0.2756, -2.2932},
  };
  m.output = {-1.2341, -0.5106, -1.1324, 0.0932};
  m.meta.calibrated = false;
  m.meta.normalization = "placeholder";
  m.meta.description =
      "reference 6-3-1 weights; normalization statistics unknown, "
      "identity placeholder in use";
  return m;
}

QualityModel load_model(std::string_view json) {
  Json doc;
  try {
    doc = Json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError("document", e.what());
  }
  if (!doc.is_object()) throw ModelFormatError("document", "expected object");
  if (doc.contains("schema") &&
      (!doc["schema"].is_number_integer() || doc["schema"].get<int>() != 1))
    throw ModelFormatError("schema", "unsupported schema version");

  QualityModel model;
  const Json& names = require(doc, "features", "features");
  if (!names.is_array()) throw ModelFormatError("features", "expected array");
  for (const auto& n : names) {
    if (!n.is_string()) throw ModelFormatError("features", "expected names");
    const auto f = feature_from_name(n.get<std::string>());
    if (!f)
      throw ModelFormatError("features",
                             "unknown feature '" + n.get<std::string>() + "'");
    model.features.push_back(*f);
  }
  const std::size_t n = model.features.size();

  const Json& norm = require(doc, "norm", "norm");
  model.norm_mean = number_array(require(norm, "mean", "norm.mean"),
                                 "norm.mean");
  model.norm_std = number_array(require(norm, "std", "norm.std"), "norm.std");
  if (model.norm_mean.size() != n)
    throw ModelFormatError("norm.mean", "length must equal feature count");
  if (model.norm_std.size() != n)
    throw ModelFormatError("norm.std", "length must equal feature count");

  const Json& hidden = require(doc, "hidden", "hidden");
  if (!hidden.is_array() || hidden.empty())
    throw ModelFormatError("hidden", "expected a non-empty array of rows");
  for (const auto& row : hidden) {
    model.hidden.push_back(number_array(row, "hidden"));
    if (model.hidden.back().size() != n + 1)
      throw ModelFormatError("hidden", "row length must be feature count + 1");
  }
  model.output = number_array(require(doc, "output", "output"), "output");
  if (model.output.size() != model.hidden.size() + 1)
    throw ModelFormatError("output", "length must be hidden count + 1");

  if (doc.contains("meta")) {
    const Json& meta = doc["meta"];
    if (!meta.is_object()) throw ModelFormatError("meta", "expected object");
    if (meta.contains("calibrated")) {
      if (!meta["calibrated"].is_boolean())
        throw ModelFormatError("meta.calibrated", "expected boolean");
      model.meta.calibrated = meta["calibrated"].get<bool>();
    }
    if (meta.contains("normalization")) {
      if (!meta["normalization"].is_string())
        throw ModelFormatError("meta.normalization", "expected string");
      model.meta.normalization = meta["normalization"].get<std::string>();
    }
    if (meta.contains("description") && meta["description"].is_string())
      model.meta.description = meta["description"].get<std::string>();
    if (meta.contains("cv_error") && meta["cv_error"].is_number())
      model.meta.cv_error = meta["cv_error"].get<double>();
    if (meta.contains("training_samples") &&
        meta["training_samples"].is_number_unsigned())
      model.meta.training_samples =
          meta["training_samples"].get<std::size_t>();
  }
  model.validate();
  return model;
}

std::string save_model(const QualityModel& model) {
  model.validate();
  Json doc;
  doc["schema"] = 1;
  Json names = Json::array();
  for (Feature f : model.features) names.push_back(feature_name(f));
  doc["features"] = names;
  doc["norm"] = {{"mean", model.norm_mean}, {"std", model.norm_std}};
  doc["hidden"] = model.hidden;
  doc["output"] = model.output;
  Json meta;
  meta["calibrated"] = model.meta.calibrated;
  meta["normalization"] = model.meta.normalization;
  meta["description"] = model.meta.description;
  if (model.meta.cv_error) meta["cv_error"] = *model.meta.cv_error;
  if (model.meta.training_samples)
    meta["training_samples"] = *model.meta.training_samples;
  doc["meta"] = meta;
  return doc.dump(2) + "\n";
}

}  // namespace jerkmeter
