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
#ifndef JERKMETER_EVAL_METRICS_H_
#define JERKMETER_EVAL_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace jerkmeter {

struct EvalReport {
  double pcc = 0.0;
  double srocc = 0.0;
  double rrmse = 0.0;  // percent
  std::size_t n = 0;
};

// Product-moment correlation. Throws DegenerateInput for n < 2, a length
// mismatch, or a constant argument.
double pearson(std::span<const double> x, std::span<const double> y);

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> fractional_ranks(std::span<const double> x);

double spearman(std::span<const double> x, std::span<const double> y);

// 100 * RMSE / scale_range. The range defaults to max(dmos) - min(dmos).
double rrmse(std::span<const double> pred, std::span<const double> dmos,
             std::optional<double> scale_range = std::nullopt);

EvalReport evaluate(std::span<const double> pred, std::span<const double> dmos,
                    std::optional<double> scale_range = std::nullopt);

}  // namespace jerkmeter

#endif  // JERKMETER_EVAL_METRICS_H_
