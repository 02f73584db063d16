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
#include "jerkmeter/training.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "jerkmeter/errors.h"
#include "jerkmeter/random.h"
#include "test_support.h"

namespace jerkmeter {
namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Eigen::VectorXd random_params(Rng& rng, std::size_t n, double scale) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = rng.uniform(-scale, scale);
  return p;
}

Eigen::MatrixXd random_inputs(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd x(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) x(i, j) = rng.normal();
  return x;
}

TEST(CapacityTest, ExhaustiveAgainstFormula) {
  for (int m = 1; m <= 10; ++m) {
    for (int n = 1; n <= 13; ++n) {
      const int weights = m * (n + 1) + m + 1;
      EXPECT_EQ(network_parameter_count(m, n), static_cast<std::size_t>(weights));
      EXPECT_EQ(capacity_ok(m, n, 52), weights < 52) << m << "," << n;
    }
  }
  // Reference 6-3-1 network: 3*7 + 3 + 1 = 25 weights.
  EXPECT_EQ(network_parameter_count(3, 6), 25u);
  EXPECT_TRUE(capacity_ok(3, 6, 52));
  EXPECT_FALSE(capacity_ok(4, 13, 52));  // 61
  EXPECT_TRUE(capacity_ok(5, 7, 52));    // 46
}

TEST(CapacityTest, BoundaryIsStrict) {
  // M(N+1)+M+1 == cap is rejected.
  EXPECT_EQ(network_parameter_count(5, 8), 51u);
  EXPECT_TRUE(capacity_ok(5, 8, 52));
  EXPECT_FALSE(capacity_ok(5, 8, 51));
}

TEST(NetworkTest, ForwardMatchesExplicitSum) {
  Rng rng(11);
  const NetworkShape shape{3, 2};
  const Eigen::VectorXd p = random_params(rng, shape.parameter_count(), 1.0);
  const Eigen::MatrixXd x = random_inputs(rng, 7, 3);
  const Eigen::VectorXd y = network_forward(p, shape, x);
  for (int i = 0; i < 7; ++i) {
    double out = p[10];
    for (int m = 0; m < 2; ++m) {
      double a = p[m * 4 + 3];
      for (int j = 0; j < 3; ++j) a += p[m * 4 + j] * x(i, j);
      out += p[8 + m] / (1.0 + std::exp(-a));
    }
    EXPECT_NEAR(y[i], out, 1e-12);
  }
}

TEST(NetworkTest, JacobianMatchesCentralDifferences) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const NetworkShape shape{static_cast<int>(rng.uniform_int(1, 6)),
                             static_cast<int>(rng.uniform_int(1, 4))};
    const Eigen::VectorXd p = random_params(rng, shape.parameter_count(), 1.5);
    const Eigen::MatrixXd x = random_inputs(rng, 9, shape.inputs);
    const Eigen::MatrixXd j = network_jacobian(p, shape, x);
    ASSERT_EQ(j.rows(), 9);
    ASSERT_EQ(j.cols(), p.size());
    const double h = 1e-6;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      Eigen::VectorXd up = p, down = p;
      up[k] += h;
      down[k] -= h;
      const Eigen::VectorXd fd =
          (network_forward(up, shape, x) - network_forward(down, shape, x)) /
          (2 * h);
      for (int i = 0; i < 9; ++i) {
        const double scale = std::max(1.0, std::abs(fd[i]));
        EXPECT_LE(std::abs(j(i, k) - fd[i]) / scale, 1e-5)
            << "param " << k << " row " << i;
      }
    }
  }
}

TEST(NetworkTest, ToQualityModelPreservesPredictions) {
  Rng rng(13);
  const NetworkShape shape{4, 3};
  const Eigen::VectorXd p = random_params(rng, shape.parameter_count(), 1.0);
  const std::vector<Feature> feats = {Feature::kNumFz, Feature::kRFD,
                                      Feature::kAvgFzDur, Feature::kAvgBgFD};
  const QualityModel m =
      to_quality_model(p, shape, feats, {0, 0, 0, 0}, {1, 1, 1, 1});
  const Eigen::MatrixXd x = random_inputs(rng, 5, 4);
  const Eigen::VectorXd y = network_forward(p, shape, x);
  for (int i = 0; i < 5; ++i) {
    std::vector<double> row(4);
    for (int j = 0; j < 4; ++j) row[static_cast<std::size_t>(j)] = x(i, j);
    EXPECT_NEAR(predict(row, m).dmos_pred, y[i], 1e-12);
  }
}

TEST(LMTest, RecoversPlantedNetwork) {
  Rng rng(21);
  const NetworkShape shape{2, 2};
  Eigen::VectorXd truth(9);
  truth << 1.5, -0.8, 0.3, -1.1, 0.9, -0.4, 2.0, -1.5, 0.7;
  const Eigen::MatrixXd x = random_inputs(rng, 60, 2);
  const Eigen::VectorXd y = network_forward(truth, shape, x);
  LMConfig cfg;
  cfg.restarts = 8;
  const LMResult fit = train_lm(x, y, 2, cfg, 99);
  EXPECT_LT(fit.mse, 1e-6);
}

TEST(LMTest, ConstantTargetsFitToNearZero) {
  Rng rng(22);
  const Eigen::MatrixXd x = random_inputs(rng, 30, 3);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(30, 4.2);
  LMConfig cfg;
  cfg.restarts = 2;
  const LMResult fit = train_lm(x, y, 1, cfg, 5);
  EXPECT_LT(fit.mse, 1e-10);
}

TEST(LMTest, AcceptedObjectiveStrictlyDecreases) {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd x = random_inputs(rng, 25, 3);
    Eigen::VectorXd y(25);
    for (int i = 0; i < 25; ++i) y[i] = std::sin(x(i, 0)) + x(i, 1) * x(i, 2);
    const NetworkShape shape{3, 2};
    const LMResult fit = fit_lm(x, y, shape, LMConfig{},
                                random_params(rng, shape.parameter_count(), 0.5));
    ASSERT_FALSE(fit.accepted_mse.empty());
    for (std::size_t i = 1; i < fit.accepted_mse.size(); ++i)
      EXPECT_LT(fit.accepted_mse[i], fit.accepted_mse[i - 1]);
    EXPECT_DOUBLE_EQ(fit.accepted_mse.back(), fit.mse);
    EXPECT_LE(fit.iterations, LMConfig{}.max_iters);
  }
}

TEST(LMTest, DeterministicInSeed) {
  Rng rng(24);
  const Eigen::MatrixXd x = random_inputs(rng, 20, 2);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) y[i] = x(i, 0) - 0.5 * x(i, 1) * x(i, 1);
  LMConfig cfg;
  cfg.restarts = 3;
  cfg.max_iters = 100;
  const LMResult a = train_lm(x, y, 2, cfg, 7);
  const LMResult b = train_lm(x, y, 2, cfg, 7);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.mse, b.mse);
}

TEST(LMTest, BadConfigRejected) {
  LMConfig cfg;
  cfg.max_iters = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = LMConfig{};
  cfg.lambda_init = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

std::vector<TrainingSample> samples_from(const std::vector<double>& f,
                                         const std::vector<double>& y) {
  std::vector<TrainingSample> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    TrainingSample s;
    s.id = "s" + std::to_string(i);
    s.source_id = "src" + std::to_string(i % 3);
    s.features[Feature::kNumFz] = f[i];
    s.dmos = y[i];
    out.push_back(s);
  }
  return out;
}

TEST(CrossValidationTest, HandTracedMeanRegressor) {
  const auto samples = samples_from({1, 10, 3, 30}, {1, 2, 3, 6});
  const std::vector<int> folds = {0, 1, 0, 1};
  const std::vector<Feature> feats = {Feature::kNumFz};
  std::vector<Normalization> seen;
  const auto factory = [](const Eigen::MatrixXd&, const Eigen::VectorXd& y,
                          int) {
    const double mean = y.mean();
    return Regressor([mean](const Eigen::MatrixXd& rows) {
      return Eigen::VectorXd::Constant(rows.rows(), mean).eval();
    });
  };
  const CvResult r = cross_validate_with(
      samples, feats, folds, 2, factory,
      [&](int, std::span<const std::size_t>, std::span<const std::size_t>,
          const Normalization& n) { seen.push_back(n); });
  // Fold 0 trains on {2,6}: predicts 4, errors 9 and 1. Fold 1 trains on
  // {1,3}: predicts 2, errors 0 and 16.
  ASSERT_EQ(r.fold_errors.size(), 2u);
  EXPECT_EQ(r.fold_errors[0], 5.0);
  EXPECT_EQ(r.fold_errors[1], 8.0);
  EXPECT_EQ(r.mean_error, 6.5);
  // Normalization comes from training rows only: {10,30} then {1,3}.
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0].mean[0], 20.0);
  EXPECT_EQ(seen[0].std[0], 10.0);
  EXPECT_EQ(seen[1].mean[0], 2.0);
  EXPECT_EQ(seen[1].std[0], 1.0);
}

TEST(CrossValidationTest, ZeroSpreadUsesUnitScale) {
  const auto samples = samples_from({5, 5, 5}, {1, 2, 3});
  const std::vector<std::size_t> rows = {0, 1, 2};
  const std::vector<Feature> feats = {Feature::kNumFz};
  const Normalization n = fit_normalization(samples, rows, feats);
  EXPECT_EQ(n.mean[0], 5.0);
  EXPECT_EQ(n.std[0], 1.0);
  const Eigen::MatrixXd x = design_matrix(samples, rows, feats, n);
  EXPECT_EQ(x.sum(), 0.0);
}

TEST(CrossValidationTest, FoldsArePartitionOfNearEqualSize) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(10, 80));
    const int k = static_cast<int>(rng.uniform_int(2, 10));
    const auto samples = samples_from(std::vector<double>(n, 0.0),
                                      std::vector<double>(n, 0.0));
    const auto ids = assign_folds(samples, k, FoldMode::kShuffled, rng.next());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int id : ids) {
      ASSERT_GE(id, 0);
      ASSERT_LT(id, k);
      ++counts[static_cast<std::size_t>(id)];
    }
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    EXPECT_LE(*hi - *lo, 1);
  }
}

TEST(CrossValidationTest, GroupedModeKeepsSourcesTogether) {
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 40; ++i) {
    TrainingSample s;
    s.id = std::to_string(i);
    s.source_id = "clip" + std::to_string(i % 8);
    samples.push_back(s);
  }
  const auto ids = assign_folds(samples, 4, FoldMode::kGroupedBySource, 3);
  std::map<std::string, std::set<int>> by_source;
  for (std::size_t i = 0; i < samples.size(); ++i)
    by_source[samples[i].source_id].insert(ids[i]);
  for (const auto& [src, f] : by_source) EXPECT_EQ(f.size(), 1u) << src;
  EXPECT_THROW(assign_folds(samples, 9, FoldMode::kGroupedBySource, 3),
               ConfigError);
}

TEST(CrossValidationTest, HeldOutRowsNeverInformNormalization) {
  Rng rng(32);
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 30; ++i) {
    TrainingSample s;
    s.id = std::to_string(i);
    s.source_id = s.id;
    for (Feature f : all_features()) s.features[f] = rng.uniform(0, 10);
    s.dmos = rng.uniform(0, 5);
    samples.push_back(s);
  }
  SearchConfig cfg;
  cfg.folds = 5;
  cfg.lm.restarts = 1;
  cfg.lm.max_iters = 20;
  const std::vector<Feature> feats = {Feature::kNumFz, Feature::kRFD};
  int calls = 0;
  cross_validate(samples, feats, 1, cfg, 4,
                 [&](int, std::span<const std::size_t> train,
                     std::span<const std::size_t> held, const Normalization& n) {
                   ++calls;
                   std::set<std::size_t> t(train.begin(), train.end());
                   for (std::size_t h : held) EXPECT_FALSE(t.count(h));
                   EXPECT_EQ(train.size() + held.size(), samples.size());
                   const auto expect = fit_normalization(samples, train, feats);
                   EXPECT_EQ(n.mean, expect.mean);
                   EXPECT_EQ(n.std, expect.std);
                 });
  EXPECT_EQ(calls, 5);
}

TEST(CrossValidationTest, DeterministicAndRejectsTooFewSamples) {
  Rng rng(33);
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 20; ++i) {
    TrainingSample s;
    s.id = std::to_string(i);
    for (Feature f : all_features()) s.features[f] = rng.normal();
    s.dmos = s.features[Feature::kNumFz] * 2;
    samples.push_back(s);
  }
  SearchConfig cfg;
  cfg.folds = 4;
  cfg.lm.restarts = 2;
  cfg.lm.max_iters = 50;
  const std::vector<Feature> feats = {Feature::kNumFz};
  const CvResult a = cross_validate(samples, feats, 1, cfg, 10);
  const CvResult b = cross_validate(samples, feats, 1, cfg, 10);
  EXPECT_EQ(a.fold_errors, b.fold_errors);
  cfg.folds = 25;
  EXPECT_THROW(cross_validate(samples, feats, 1, cfg, 10), ConfigError);
}

TEST(SearchTest, SubsetCountsAndOrder) {
  for (std::size_t k = 1; k <= kFeatureCount; ++k)
    EXPECT_EQ(enumerate_subsets(k).size(), binomial(kFeatureCount, k)) << k;
  EXPECT_EQ(enumerate_subsets(6).size(), 1716u);
  const auto pairs = enumerate_subsets(2);
  EXPECT_EQ(pairs.size(), 78u);
  EXPECT_TRUE(std::is_sorted(pairs.begin(), pairs.end()));
  std::set<std::vector<Feature>> unique(pairs.begin(), pairs.end());
  EXPECT_EQ(unique.size(), pairs.size());
  for (const auto& p : pairs) EXPECT_LT(p[0], p[1]);
}

TEST(SearchTest, CandidatesRespectCapacity) {
  SearchConfig cfg;
  const auto cands = enumerate_candidates(cfg);
  std::size_t expect = 0;
  for (int n : cfg.subset_sizes)
    for (int m : cfg.hidden_range)
      if (capacity_ok(m, n, 52)) expect += binomial(13, static_cast<std::uint64_t>(n));
  EXPECT_EQ(cands.size(), expect);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    EXPECT_EQ(cands[i].index, i);
    EXPECT_TRUE(capacity_ok(cands[i].hidden,
                            static_cast<int>(cands[i].features.size()), 52));
  }
}

TEST(SearchTest, PicksPlantedPair) {
  Rng rng(41);
  std::vector<TrainingSample> samples;
  for (int i = 0; i < 40; ++i) {
    TrainingSample s;
    s.id = std::to_string(i);
    s.source_id = s.id;
    for (Feature f : all_features()) s.features[f] = rng.uniform(0, 4);
    s.dmos = 1.0 + 0.8 * s.features[Feature::kNumFz] -
             0.5 * s.features[Feature::kRFD];
    samples.push_back(s);
  }
  SearchConfig cfg;
  cfg.subset_sizes = {2};
  cfg.hidden_range = {1};
  cfg.folds = 4;
  cfg.seed = 17;
  cfg.threads = 2;
  cfg.lm.restarts = 2;
  cfg.lm.max_iters = 60;
  const SearchResult r = exhaustive_search(samples, cfg);
  EXPECT_EQ(r.evaluated, 78u);
  ASSERT_EQ(r.ranking.size(), 78u);
  const std::vector<Feature> planted = {Feature::kNumFz, Feature::kRFD};
  EXPECT_EQ(r.ranking.front().features, planted);
  for (std::size_t i = 1; i < r.ranking.size(); ++i) {
    const auto& a = r.ranking[i - 1];
    const auto& b = r.ranking[i];
    EXPECT_TRUE(a.cv_error < b.cv_error ||
                (a.cv_error == b.cv_error && a.index < b.index));
  }
  EXPECT_EQ(r.model.features, planted);
  EXPECT_TRUE(r.model.meta.calibrated);
  EXPECT_EQ(r.model.meta.training_samples, 40u);

  cfg.threads = 1;
  const SearchResult again = exhaustive_search(samples, cfg);
  EXPECT_EQ(ranking_to_csv(again.ranking), ranking_to_csv(r.ranking));
  EXPECT_EQ(save_model(again.model), save_model(r.model));
}

}  // namespace
}  // namespace jerkmeter
