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
#ifndef JERKMETER_QUALITY_MODEL_H_
#define JERKMETER_QUALITY_MODEL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jerkmeter/features.h"

namespace jerkmeter {

struct ModelMeta {
  // False while the normalization statistics are placeholders.
  bool calibrated = false;
  std::string normalization = "placeholder";  // "placeholder" | "fitted"
  std::string description;
  std::optional<double> cv_error;
  std::optional<std::size_t> training_samples;

  friend bool operator==(const ModelMeta&, const ModelMeta&) = default;
};

// One hidden layer of sigmoid units between linear input and output units.
// hidden[m] holds N input weights followed by the unit's bias; output holds
// M weights followed by the output bias.
struct QualityModel {
  std::vector<Feature> features;
  std::vector<double> norm_mean;
  std::vector<double> norm_std;
  std::vector<std::vector<double>> hidden;
  std::vector<double> output;
  ModelMeta meta;

  std::size_t input_count() const { return features.size(); }
  std::size_t hidden_count() const { return hidden.size(); }
  std::size_t parameter_count() const {
    return hidden_count() * (input_count() + 1) + hidden_count() + 1;
  }

  // Throws InvalidModel when any invariant is broken.
  void validate() const;

  friend bool operator==(const QualityModel&, const QualityModel&) = default;
};

struct QualityScore {
  double dmos_pred = 0.0;
};

// Overflow-free logistic function.
double sigmoid(double t);

// z-scores of the model's selected features, in model order.
std::vector<double> normalize(const FeatureVector& fv,
                              const QualityModel& model);

// Throws ShapeError when x.size() != model.input_count().
QualityScore predict(std::span<const double> x, const QualityModel& model);

QualityScore score(const FeatureVector& fv, const QualityModel& model);

// Six-feature, three-hidden-unit network with reference weights and
// placeholder (identity) normalization.
QualityModel default_model();

// JSON schema: {"schema":1,"features":[...],"norm":{"mean":[],"std":[]},
// "hidden":[[...]],"output":[...],"meta":{...}}.
// Throws ModelFormatError(field) on schema violations and InvalidModel on
// broken invariants.
QualityModel load_model(std::string_view json);
std::string save_model(const QualityModel& model);

}  // namespace jerkmeter

#endif  // JERKMETER_QUALITY_MODEL_H_
