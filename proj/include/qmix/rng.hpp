// Copyright 2026 The qmix Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace qmix {

/// Seedable 64-bit generator with bit-exact output across platforms.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard.
/// The distributions below are implemented here instead of using the
/// library ones, which are allowed to differ between implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n). `n` must be positive.
  std::uint64_t uniform_int(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stream split: the seed of sub-stream `index` of `master` within the
/// named `stream` is mix64 applied to the running hash of
/// (master, stream, index). Sub-seeds depend only on these three values,
/// never on evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index);

namespace streams {
inline constexpr std::uint64_t kRealization = 1;
inline constexpr std::uint64_t kShots = 2;
inline constexpr std::uint64_t kHaarStates = 3;
inline constexpr std::uint64_t kRestarts = 4;
inline constexpr std::uint64_t kGridCell = 5;
}  // namespace streams

}  // namespace qmix
