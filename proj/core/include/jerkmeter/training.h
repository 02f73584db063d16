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
#ifndef JERKMETER_TRAINING_H_
#define JERKMETER_TRAINING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jerkmeter/features.h"
#include "jerkmeter/quality_model.h"

namespace jerkmeter {

struct TrainingSample {
  std::string id;
  std::string source_id;
  FeatureVector features;
  double dmos = 0.0;
};

// Levenberg-Marquardt schedule. Damping is lambda * I.
struct LMConfig {
  double lambda_init = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 0.1;
  int max_iters = 500;
  double tol_grad = 1e-8;
  double tol_step = 1e-10;
  double init_scale = 0.5;
  int restarts = 5;

  void validate() const;  // ConfigError
};

enum class FoldMode { kShuffled, kGroupedBySource };

struct SearchConfig {
  std::vector<int> hidden_range = {1, 2, 3, 4};
  std::vector<int> subset_sizes = {4, 5, 6, 7};
  int folds = 10;
  int sample_count_cap = 52;
  std::uint64_t seed = 0;
  LMConfig lm;
  FoldMode fold_mode = FoldMode::kShuffled;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;  // ConfigError
};

// True iff a network with M hidden and N inputs has fewer than `cap`
// trainable weights, i.e. M(N+1) + M + 1 < cap.
bool capacity_ok(int hidden, int inputs, int cap);
std::size_t network_parameter_count(int hidden, int inputs);

// Flat parameter layout: hidden unit m occupies [m(N+1), (m+1)(N+1)) as N
// weights then its bias; the last M+1 entries are the output weights and
// output bias.
struct NetworkShape {
  int inputs = 0;
  int hidden = 0;

  std::size_t parameter_count() const {
    return network_parameter_count(hidden, inputs);
  }
};

// Network output for every row of x.
Eigen::VectorXd network_forward(const Eigen::VectorXd& params,
                                const NetworkShape& shape,
                                const Eigen::MatrixXd& x);

// d(output_i)/d(params_k), analytic.
Eigen::MatrixXd network_jacobian(const Eigen::VectorXd& params,
                                 const NetworkShape& shape,
                                 const Eigen::MatrixXd& x);

QualityModel to_quality_model(const Eigen::VectorXd& params,
                              const NetworkShape& shape,
                              std::vector<Feature> features,
                              std::vector<double> norm_mean,
                              std::vector<double> norm_std);

struct LMResult {
  Eigen::VectorXd params;
  double mse = 0.0;
  int iterations = 0;                 // trial steps taken by the kept run
  std::vector<double> accepted_mse;   // objective after each accepted step
  int restart = 0;                    // index of the kept run
};

// Single run from a given starting point.
LMResult fit_lm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                const NetworkShape& shape, const LMConfig& config,
                Eigen::VectorXd initial);

// Best of config.restarts runs from uniform(+-init_scale) starts; x must be
// normalized already. Deterministic in seed. Throws NumericalFailure.
LMResult train_lm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                  int hidden, const LMConfig& config, std::uint64_t seed);

struct Normalization {
  std::vector<double> mean;
  std::vector<double> std;  // population; a zero spread is replaced by 1
};

Normalization fit_normalization(std::span<const TrainingSample> samples,
                                std::span<const std::size_t> rows,
                                std::span<const Feature> features);

Eigen::MatrixXd design_matrix(std::span<const TrainingSample> samples,
                              std::span<const std::size_t> rows,
                              std::span<const Feature> features,
                              const Normalization& norm);

// Fold id per sample. Shuffled mode deals a seeded permutation into
// near-equal contiguous batches; grouped mode deals whole source_ids.
std::vector<int> assign_folds(std::span<const TrainingSample> samples,
                              int folds, FoldMode mode, std::uint64_t seed);

struct CvResult {
  double mean_error = 0.0;
  std::vector<double> fold_errors;
};

// Sees every fold's split and the statistics used to normalize it.
using FoldObserver = std::function<void(
    int fold, std::span<const std::size_t> train,
    std::span<const std::size_t> held_out, const Normalization& norm)>;

// Fits on normalized training rows and returns a predictor for normalized
// rows.
using Regressor = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;
using RegressorFactory = std::function<Regressor(
    const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int fold)>;

CvResult cross_validate_with(std::span<const TrainingSample> samples,
                             std::span<const Feature> features,
                             std::span<const int> fold_ids, int folds,
                             const RegressorFactory& factory,
                             const FoldObserver& observer = {});

// Network cross-validation; the LM seed of fold k is derive_seed(seed, k).
// Throws ConfigError when there are fewer samples than folds.
CvResult cross_validate(std::span<const TrainingSample> samples,
                        std::span<const Feature> features, int hidden,
                        const SearchConfig& config, std::uint64_t seed,
                        const FoldObserver& observer = {});

struct Candidate {
  std::vector<Feature> features;
  int hidden = 0;
  double cv_error = 0.0;
  std::size_t index = 0;  // enumeration order
};

struct SearchResult {
  std::vector<Candidate> ranking;  // ascending cv_error, ties by index
  QualityModel model;              // winner retrained on every sample
  std::size_t evaluated = 0;
};

// All size-k subsets of the 13 features in lexicographic order.
std::vector<std::vector<Feature>> enumerate_subsets(std::size_t k);

// Every (subset, M) with |subset| in subset_sizes and M in hidden_range that
// passes capacity_ok, in evaluation order.
std::vector<Candidate> enumerate_candidates(const SearchConfig& config);

SearchResult exhaustive_search(std::span<const TrainingSample> samples,
                               const SearchConfig& config);

// Normalizes over all samples and trains the final network.
QualityModel retrain(std::span<const TrainingSample> samples,
                     std::span<const Feature> features, int hidden,
                     const LMConfig& config, std::uint64_t seed);

// rank,features,hidden,cv_error with '+'-joined feature names.
std::string ranking_to_csv(const std::vector<Candidate>& ranking);

}  // namespace jerkmeter

#endif  // JERKMETER_TRAINING_H_
