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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jerkmeter/degradation.h"
#include "jerkmeter/errors.h"
#include "jerkmeter/features.h"
#include "jerkmeter/random.h"

namespace jerkmeter {
namespace {

namespace fs = std::filesystem;

TEST(DatasetTest, FeatureTableRoundTrip) {
  Rng rng(3);
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 12; ++i) {
    TrainingSample s;
    s.id = "clip" + std::to_string(i);
    s.source_id = "src" + std::to_string(i / 3);
    s.dmos = rng.uniform(0, 100);
    for (Feature f : all_features()) s.features[f] = rng.normal() * 1e3;
    samples.push_back(s);
  }
  std::stringstream ss;
  write_samples_csv(samples, ss);
  const auto back = read_samples_csv(ss, ".");
  ASSERT_EQ(back.size(), samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].id, samples[i].id);
    EXPECT_EQ(back[i].source_id, samples[i].source_id);
    EXPECT_EQ(back[i].dmos, samples[i].dmos);
    EXPECT_EQ(back[i].features, samples[i].features);
  }
}

TEST(DatasetTest, MalformedTables) {
  {
    std::istringstream in("id,dmos\na,1\n");
    EXPECT_THROW(read_samples_csv(in, "."), ParseError);
  }
  {
    std::istringstream in("id,source_id,dmos\na,b,1\n");
    EXPECT_THROW(read_samples_csv(in, "."), ParseError);
  }
  {
    std::istringstream in("id,source_id,dmos,video\na,b,x1,v.y4m\n");
    try {
      read_samples_csv(in, ".");
      FAIL();
    } catch (const ParseError& e) {
      EXPECT_EQ(e.position(), 2u);
    }
  }
  {
    std::istringstream in("id,source_id,dmos,video\na,b,1\n");
    EXPECT_THROW(read_samples_csv(in, "."), ParseError);
  }
  {
    std::istringstream in("id,source_id,dmos,video\na,b,1,missing.y4m\n");
    EXPECT_THROW(read_samples_csv(in, "/nonexistent-dir"), IoError);
  }
}

TEST(DatasetTest, VideoRowsAreAnalyzed) {
  const fs::path dir = fs::temp_directory_path() / "jerkmeter_dataset_test";
  fs::create_directories(dir);
  SynthConfig cfg;
  cfg.frames = 60;
  cfg.width = 16;
  cfg.height = 16;
  const auto degraded =
      inject(synth_gradient(cfg), {FreezeKind::kLoss, {{10, 4}, {30, 6}}});
  {
    std::ofstream f(dir / "a.y4m", std::ios::binary);
    write_y4m(degraded.video, f);
  }
  {
    std::ofstream f(dir / "table.csv");
    f << "id,source_id,dmos,video\nx,s,42.5,a.y4m\n";
  }
  const auto samples = load_samples_csv(dir / "table.csv");
  ASSERT_EQ(samples.size(), 1u);
  EXPECT_EQ(samples[0].dmos, 42.5);
  EXPECT_EQ(samples[0].features, analyze(degraded.video).features);
  EXPECT_EQ(samples[0].features[Feature::kNumFz], 2.0);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace jerkmeter
