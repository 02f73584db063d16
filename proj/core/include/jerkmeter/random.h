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

#ifndef JERKMETER_RANDOM_H_
#define JERKMETER_RANDOM_H_

#include <cstdint>
#include <random>

namespace jerkmeter {

// Deterministic random source. std::mt19937_64's raw output is fixed by the
// standard, but the std distributions are not, so every derived draw is
// computed here to keep results identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [lo, hi], unbiased via rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Standard normal via Box-Muller (one value per call, spare discarded).
  double normal();

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; derives independent per-task seeds from a base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace jerkmeter

#endif  // JERKMETER_RANDOM_H_
