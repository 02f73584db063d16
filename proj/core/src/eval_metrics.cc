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
#include "jerkmeter/eval_metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jerkmeter/errors.h"

namespace jerkmeter {
namespace {

void check_pair(std::span<const double> x, std::span<const double> y,
                std::size_t min_n) {
  if (x.size() != y.size())
    throw DegenerateInput("inputs differ in length");
  if (x.size() < min_n)
    throw DegenerateInput("need at least " + std::to_string(min_n) +
                          " samples");
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 2);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DegenerateInput("correlation of a constant input is undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> fractional_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 2);
  const std::vector<double> rx = fractional_ranks(x);
  const std::vector<double> ry = fractional_ranks(y);
  return pearson(rx, ry);
}

double rrmse(std::span<const double> pred, std::span<const double> dmos,
             std::optional<double> scale_range) {
  check_pair(pred, dmos, 1);
  double range;
  if (scale_range) {
    range = *scale_range;
  } else {
    const auto [lo, hi] = std::minmax_element(dmos.begin(), dmos.end());
    range = *hi - *lo;
  }
  if (!(range > 0.0)) throw DegenerateInput("rRMSE scale range must be > 0");
  double ss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    ss += (pred[i] - dmos[i]) * (pred[i] - dmos[i]);
  return 100.0 * std::sqrt(ss / static_cast<double>(pred.size())) / range;
}

EvalReport evaluate(std::span<const double> pred, std::span<const double> dmos,
                    std::optional<double> scale_range) {
  EvalReport r;
  r.pcc = pearson(pred, dmos);
  r.srocc = spearman(pred, dmos);
  r.rrmse = rrmse(pred, dmos, scale_range);
  r.n = pred.size();
  return r;
}

}  // namespace jerkmeter
