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
#ifndef JERKMETER_DATASET_H_
#define JERKMETER_DATASET_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "jerkmeter/freeze_detection.h"
#include "jerkmeter/training.h"

namespace jerkmeter {

// One row per processed sequence. Required columns: id, source_id, dmos.
// Each row then needs either a non-empty `video` (Y4M path, relative to
// `base_dir`) or all 13 feature columns named as in feature_name().
std::vector<TrainingSample> read_samples_csv(
    std::istream& in, const std::filesystem::path& base_dir,
    const DetectorConfig& detector = {});

std::vector<TrainingSample> load_samples_csv(
    const std::filesystem::path& path, const DetectorConfig& detector = {});

// Writes the 13-feature-column form with round-trip precision.
void write_samples_csv(std::span<const TrainingSample> samples,
                       std::ostream& out);

}  // namespace jerkmeter

#endif  // JERKMETER_DATASET_H_
