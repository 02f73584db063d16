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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "jerkmeter/errors.h"
#include "jerkmeter/random.h"

namespace jerkmeter {
namespace {

constexpr double kLambdaCeiling = 1e16;
constexpr double kLambdaFloor = 1e-15;
constexpr std::uint64_t kRetrainSeedSalt = 0x5eed'f1a1ULL;

double mean_squared(const Eigen::VectorXd& r) {
  return r.size() == 0 ? 0.0 : r.squaredNorm() / static_cast<double>(r.size());
}

double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

void LMConfig::validate() const {
  if (!(lambda_init > 0.0)) throw ConfigError("lambda_init must be > 0");
  if (!(lambda_up > 1.0)) throw ConfigError("lambda_up must be > 1");
  if (!(lambda_down > 0.0 && lambda_down < 1.0))
    throw ConfigError("lambda_down must be in (0, 1)");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(tol_grad > 0.0) || !(tol_step > 0.0))
    throw ConfigError("tolerances must be > 0");
  if (!(init_scale > 0.0)) throw ConfigError("init_scale must be > 0");
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
}

void SearchConfig::validate() const {
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (hidden_range.empty()) throw ConfigError("hidden range is empty");
  if (subset_sizes.empty()) throw ConfigError("subset sizes are empty");
  for (int m : hidden_range)
    if (m < 1) throw ConfigError("hidden node counts must be >= 1");
  for (int n : subset_sizes)
    if (n < 1 || n > static_cast<int>(kFeatureCount))
      throw ConfigError("subset sizes must be in [1, 13]");
  if (sample_count_cap < 1) throw ConfigError("capacity cap must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  lm.validate();
}

std::size_t network_parameter_count(int hidden, int inputs) {
  return static_cast<std::size_t>(hidden) * (inputs + 1) + hidden + 1;
}

bool capacity_ok(int hidden, int inputs, int cap) {
  return static_cast<long long>(hidden) * (inputs + 1) + hidden + 1 < cap;
}

Eigen::VectorXd network_forward(const Eigen::VectorXd& params,
                                const NetworkShape& shape,
                                const Eigen::MatrixXd& x) {
  const int n = shape.inputs;
  const int m = shape.hidden;
  const Eigen::Index out_base = static_cast<Eigen::Index>(m) * (n + 1);
  Eigen::VectorXd f =
      Eigen::VectorXd::Constant(x.rows(), params[out_base + m]);
  for (int u = 0; u < m; ++u) {
    const Eigen::Index base = static_cast<Eigen::Index>(u) * (n + 1);
    const Eigen::VectorXd a =
        (x * params.segment(base, n)).array() + params[base + n];
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      f[i] += params[out_base + u] * logistic(a[i]);
  }
  return f;
}

Eigen::MatrixXd network_jacobian(const Eigen::VectorXd& params,
                                 const NetworkShape& shape,
                                 const Eigen::MatrixXd& x) {
  const int n = shape.inputs;
  const int m = shape.hidden;
  const Eigen::Index out_base = static_cast<Eigen::Index>(m) * (n + 1);
  Eigen::MatrixXd jac(x.rows(), static_cast<Eigen::Index>(
                                    shape.parameter_count()));
  for (int u = 0; u < m; ++u) {
    const Eigen::Index base = static_cast<Eigen::Index>(u) * (n + 1);
    const double v = params[out_base + u];
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double a = x.row(i).dot(params.segment(base, n)) + params[base + n];
      const double h = logistic(a);
      const double slope = v * h * (1.0 - h);
      for (int j = 0; j < n; ++j) jac(i, base + j) = slope * x(i, j);
      jac(i, base + n) = slope;
      jac(i, out_base + u) = h;
    }
  }
  jac.col(out_base + m).setOnes();
  return jac;
}

QualityModel to_quality_model(const Eigen::VectorXd& params,
                              const NetworkShape& shape,
                              std::vector<Feature> features,
                              std::vector<double> norm_mean,
                              std::vector<double> norm_std) {
  QualityModel model;
  model.features = std::move(features);
  model.norm_mean = std::move(norm_mean);
  model.norm_std = std::move(norm_std);
  const int n = shape.inputs;
  for (int u = 0; u < shape.hidden; ++u) {
    const Eigen::Index base = static_cast<Eigen::Index>(u) * (n + 1);
    model.hidden.emplace_back(params.data() + base,
                              params.data() + base + n + 1);
  }
  const Eigen::Index out_base = static_cast<Eigen::Index>(shape.hidden) * (n + 1);
  model.output.assign(params.data() + out_base,
                      params.data() + out_base + shape.hidden + 1);
  return model;
}

LMResult fit_lm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                const NetworkShape& shape, const LMConfig& config,
                Eigen::VectorXd initial) {
  const auto p = static_cast<Eigen::Index>(shape.parameter_count());
  if (initial.size() != p) throw ShapeError("fit_lm: parameter count mismatch");
  if (x.rows() != y.size() || x.cols() != shape.inputs)
    throw ShapeError("fit_lm: design matrix does not match targets/shape");
  if (x.rows() == 0) throw ConfigError("fit_lm: no training samples");

  LMResult result;
  result.params = std::move(initial);
  Eigen::VectorXd residual = y - network_forward(result.params, shape, x);
  result.mse = mean_squared(residual);
  if (!std::isfinite(result.mse))
    throw NumericalFailure("non-finite objective at the starting point");

  double lambda = config.lambda_init;
  Eigen::MatrixXd jtj;
  Eigen::VectorXd gradient;
  bool refresh = true;
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(p, p);

  while (result.iterations < config.max_iters) {
    if (refresh) {
      const Eigen::MatrixXd jac = network_jacobian(result.params, shape, x);
      jtj = jac.transpose() * jac;
      gradient = jac.transpose() * residual;
      refresh = false;
      if (gradient.lpNorm<Eigen::Infinity>() < config.tol_grad) break;
    }
    ++result.iterations;
    const Eigen::LLT<Eigen::MatrixXd> llt(jtj + lambda * identity);
    const Eigen::VectorXd step = llt.solve(gradient);
    if (llt.info() != Eigen::Success || !step.allFinite()) {
      lambda *= config.lambda_up;
      if (lambda > kLambdaCeiling)
        throw NumericalFailure("damped normal equations stay singular");
      continue;
    }
    if (step.norm() <= config.tol_step * (result.params.norm() + config.tol_step))
      break;
    const Eigen::VectorXd trial = result.params + step;
    const Eigen::VectorXd trial_residual =
        y - network_forward(trial, shape, x);
    const double trial_mse = mean_squared(trial_residual);
    if (std::isfinite(trial_mse) && trial_mse < result.mse) {
      result.params = trial;
      residual = trial_residual;
      result.mse = trial_mse;
      result.accepted_mse.push_back(trial_mse);
      lambda = std::max(lambda * config.lambda_down, kLambdaFloor);
      refresh = true;
    } else {
      lambda *= config.lambda_up;
      if (lambda > kLambdaCeiling) break;
    }
  }
  return result;
}

LMResult train_lm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                  int hidden, const LMConfig& config, std::uint64_t seed) {
  config.validate();
  if (hidden < 1) throw ConfigError("hidden node count must be >= 1");
  const NetworkShape shape{static_cast<int>(x.cols()), hidden};
  const auto p = static_cast<Eigen::Index>(shape.parameter_count());
  LMResult best;
  bool have_best = false;
  for (int r = 0; r < config.restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    Eigen::VectorXd init(p);
    for (Eigen::Index k = 0; k < p; ++k)
      init[k] = rng.uniform(-config.init_scale, config.init_scale);
    LMResult run = fit_lm(x, y, shape, config, std::move(init));
    run.restart = r;
    if (!have_best || run.mse < best.mse) {
      best = std::move(run);
      have_best = true;
    }
  }
  return best;
}

Normalization fit_normalization(std::span<const TrainingSample> samples,
                                std::span<const std::size_t> rows,
                                std::span<const Feature> features) {
  Normalization norm;
  const double count = static_cast<double>(rows.size());
  for (Feature f : features) {
    double sum = 0.0;
    for (std::size_t r : rows) sum += samples[r].features[f];
    const double mean = rows.empty() ? 0.0 : sum / count;
    double ss = 0.0;
    for (std::size_t r : rows) {
      const double d = samples[r].features[f] - mean;
      ss += d * d;
    }
    const double sd = rows.empty() ? 0.0 : std::sqrt(ss / count);
    norm.mean.push_back(mean);
    norm.std.push_back(sd > 0.0 ? sd : 1.0);
  }
  return norm;
}

Eigen::MatrixXd design_matrix(std::span<const TrainingSample> samples,
                              std::span<const std::size_t> rows,
                              std::span<const Feature> features,
                              const Normalization& norm) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(features.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < features.size(); ++j)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (samples[rows[i]].features[features[j]] - norm.mean[j]) /
          norm.std[j];
  return x;
}

std::vector<int> assign_folds(std::span<const TrainingSample> samples,
                              int folds, FoldMode mode, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("folds must be >= 2");
  Rng rng(seed);
  auto shuffle = [&](std::vector<std::size_t>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
      std::swap(v[i - 1], v[j]);
    }
  };
  std::vector<int> fold_of(samples.size(), 0);
  if (mode == FoldMode::kShuffled) {
    if (samples.size() < static_cast<std::size_t>(folds))
      throw ConfigError("fewer samples (" + std::to_string(samples.size()) +
                        ") than folds (" + std::to_string(folds) + ")");
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    shuffle(order);
    const std::size_t n = order.size();
    for (std::size_t pos = 0; pos < n; ++pos)
      fold_of[order[pos]] = static_cast<int>(pos * folds / n);
    return fold_of;
  }
  std::vector<std::string> groups;
  for (const auto& s : samples) groups.push_back(s.source_id);
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  if (groups.size() < static_cast<std::size_t>(folds))
    throw ConfigError("fewer source groups (" + std::to_string(groups.size()) +
                      ") than folds (" + std::to_string(folds) + ")");
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  shuffle(order);
  std::vector<int> group_fold(groups.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    group_fold[order[pos]] = static_cast<int>(pos * folds / order.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto it =
        std::lower_bound(groups.begin(), groups.end(), samples[i].source_id);
    fold_of[i] = group_fold[static_cast<std::size_t>(it - groups.begin())];
  }
  return fold_of;
}

CvResult cross_validate_with(std::span<const TrainingSample> samples,
                             std::span<const Feature> features,
                             std::span<const int> fold_ids, int folds,
                             const RegressorFactory& factory,
                             const FoldObserver& observer) {
  if (fold_ids.size() != samples.size())
    throw ShapeError("one fold id per sample required");
  CvResult result;
  for (int k = 0; k < folds; ++k) {
    std::vector<std::size_t> train, held;
    for (std::size_t i = 0; i < samples.size(); ++i)
      (fold_ids[i] == k ? held : train).push_back(i);
    if (held.empty() || train.empty())
      throw ConfigError("fold " + std::to_string(k) + " is empty");
    const Normalization norm = fit_normalization(samples, train, features);
    if (observer) observer(k, train, held, norm);
    const Eigen::MatrixXd x_train = design_matrix(samples, train, features, norm);
    Eigen::VectorXd y_train(static_cast<Eigen::Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i)
      y_train[static_cast<Eigen::Index>(i)] = samples[train[i]].dmos;
    const Regressor predictor = factory(x_train, y_train, k);
    const Eigen::MatrixXd x_held = design_matrix(samples, held, features, norm);
    const Eigen::VectorXd pred = predictor(x_held);
    double ss = 0.0;
    for (std::size_t i = 0; i < held.size(); ++i) {
      const double d = pred[static_cast<Eigen::Index>(i)] - samples[held[i]].dmos;
      ss += d * d;
    }
    result.fold_errors.push_back(ss / static_cast<double>(held.size()));
  }
  result.mean_error =
      std::accumulate(result.fold_errors.begin(), result.fold_errors.end(),
                      0.0) /
      static_cast<double>(folds);
  return result;
}

CvResult cross_validate(std::span<const TrainingSample> samples,
                        std::span<const Feature> features, int hidden,
                        const SearchConfig& config, std::uint64_t seed,
                        const FoldObserver& observer) {
  config.validate();
  if (samples.size() < static_cast<std::size_t>(config.folds))
    throw ConfigError("fewer samples (" + std::to_string(samples.size()) +
                      ") than folds (" + std::to_string(config.folds) + ")");
  const std::vector<int> fold_ids =
      assign_folds(samples, config.folds, config.fold_mode, config.seed);
  const NetworkShape shape{static_cast<int>(features.size()), hidden};
  RegressorFactory factory = [&](const Eigen::MatrixXd& x,
                                 const Eigen::VectorXd& y, int fold) {
    const LMResult fit = train_lm(x, y, hidden, config.lm,
                                  derive_seed(seed, static_cast<std::uint64_t>(fold)));
    return Regressor([params = fit.params, shape](const Eigen::MatrixXd& rows) {
      return network_forward(params, shape, rows);
    });
  };
  return cross_validate_with(samples, features, fold_ids, config.folds, factory,
                             observer);
}

std::vector<std::vector<Feature>> enumerate_subsets(std::size_t k) {
  std::vector<std::vector<Feature>> out;
  if (k == 0 || k > kFeatureCount) return out;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<Feature> subset;
    for (std::size_t i : idx) subset.push_back(static_cast<Feature>(i));
    out.push_back(std::move(subset));
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == kFeatureCount - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<Candidate> enumerate_candidates(const SearchConfig& config) {
  std::vector<Candidate> out;
  for (int n : config.subset_sizes) {
    for (auto& subset : enumerate_subsets(static_cast<std::size_t>(n))) {
      for (int m : config.hidden_range) {
        if (!capacity_ok(m, n, config.sample_count_cap)) continue;
        Candidate c;
        c.features = subset;
        c.hidden = m;
        c.index = out.size();
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

QualityModel retrain(std::span<const TrainingSample> samples,
                     std::span<const Feature> features, int hidden,
                     const LMConfig& config, std::uint64_t seed) {
  std::vector<std::size_t> all(samples.size());
  std::iota(all.begin(), all.end(), 0);
  const Normalization norm = fit_normalization(samples, all, features);
  const Eigen::MatrixXd x = design_matrix(samples, all, features, norm);
  Eigen::VectorXd y(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i)
    y[static_cast<Eigen::Index>(i)] = samples[i].dmos;
  const LMResult fit = train_lm(x, y, hidden, config, seed);
  const NetworkShape shape{static_cast<int>(features.size()), hidden};
  QualityModel model = to_quality_model(
      fit.params, shape, std::vector<Feature>(features.begin(), features.end()),
      norm.mean, norm.std);
  model.meta.calibrated = true;
  model.meta.normalization = "fitted";
  model.meta.training_samples = samples.size();
  return model;
}

SearchResult exhaustive_search(std::span<const TrainingSample> samples,
                               const SearchConfig& config) {
  config.validate();
  if (samples.size() < static_cast<std::size_t>(config.folds))
    throw ConfigError("fewer samples (" + std::to_string(samples.size()) +
                      ") than folds (" + std::to_string(config.folds) + ")");
  std::vector<Candidate> candidates = enumerate_candidates(config);
  if (candidates.empty())
    throw ConfigError("no (hidden, subset size) pair passes the capacity cap " +
                      std::to_string(config.sample_count_cap));

  unsigned workers = config.threads > 0
                         ? static_cast<unsigned>(config.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(candidates.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < candidates.size(); i = next++) {
      Candidate& c = candidates[i];
      try {
        c.cv_error = cross_validate(samples, c.features, c.hidden, config,
                                    derive_seed(config.seed, c.index))
                         .mean_error;
      } catch (const NumericalFailure&) {
        c.cv_error = std::numeric_limits<double>::infinity();
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
      if (std::isnan(c.cv_error))
        c.cv_error = std::numeric_limits<double>::infinity();
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SearchResult result;
  result.evaluated = candidates.size();
  result.ranking = std::move(candidates);
  std::sort(result.ranking.begin(), result.ranking.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.cv_error != b.cv_error) return a.cv_error < b.cv_error;
              return a.index < b.index;
            });
  const Candidate& best = result.ranking.front();
  result.model = retrain(samples, best.features, best.hidden, config.lm,
                         derive_seed(config.seed, kRetrainSeedSalt));
  result.model.meta.cv_error = best.cv_error;
  std::ostringstream desc;
  desc << "exhaustive search winner: " << best.features.size()
       << " features, " << best.hidden << " hidden units";
  result.model.meta.description = desc.str();
  return result;
}

std::string ranking_to_csv(const std::vector<Candidate>& ranking) {
  std::ostringstream out;
  out << "rank,features,hidden,cv_error\n";
  char buf[64];
  for (std::size_t r = 0; r < ranking.size(); ++r) {
    const Candidate& c = ranking[r];
    out << r + 1 << ',';
    for (std::size_t j = 0; j < c.features.size(); ++j)
      out << (j ? "+" : "") << feature_name(c.features[j]);
    std::snprintf(buf, sizeof buf, "%.17g", c.cv_error);
    out << ',' << c.hidden << ',' << buf << '\n';
  }
  return out.str();
}

}  // namespace jerkmeter
