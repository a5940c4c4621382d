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

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "qmix/circuit.hpp"
#include "qmix/rng.hpp"
#include "qmix/sim.hpp"

namespace qmix {

/// A Z phase gate of the base circuit considered for replacement.
struct ReplacementCandidate {
  std::size_t gate_index = 0;
  double alpha = 0.0;
  double d_min = 0.0;
  double theta_tilde = 0.0;

  friend bool operator==(const ReplacementCandidate&,
                         const ReplacementCandidate&) = default;
};

enum class ReplacementMode {
  kMixture,  // identity with probability p, else Z_theta_tilde
  kSquash,   // always identity (p = 1)
};

/// Result of the greedy budgeted preprocessing.
///
/// Invariants: spent is the sum of accepted d_min and never exceeds
/// epsilon; `accepted` is ordered by ascending d_min (then gate index); each
/// accepted squash strictly lowered the simplified two-qubit count given the
/// squashes accepted before it.
struct ReplacementPlan {
  Circuit base;
  double p = 0.0;
  double epsilon = 0.0;
  ReplacementMode mode = ReplacementMode::kMixture;
  std::vector<ReplacementCandidate> accepted;
  double spent = 0.0;
  std::size_t baseline_2q = 0;
  /// Simplified two-qubit count with every accepted gate squashed.
  std::size_t squashed_2q = 0;

  /// Accepted positions as channel sites, sorted by gate index.
  std::vector<MixedSite> mixed_sites() const;
};

/// All ZPhase gates of `c` with their replacement cost at probability p,
/// sorted by (d_min, gate_index).
std::vector<ReplacementCandidate> rank_candidates(const Circuit& c, double p);

/// Greedy preprocessing. Candidates are scanned once in ranked order; one
/// is accepted iff it fits the remaining budget and squashing it on top of
/// the already accepted squashes strictly lowers the best_simplify CNOT
/// count. Requires epsilon >= 0 and p in [0, 1).
ReplacementPlan plan_replacements(const Circuit& c, double epsilon, double p);

/// Phase-squashing baseline (p = 1): same scan, distances 2|sin(alpha/2)|.
ReplacementPlan plan_squash(const Circuit& c, double epsilon);

/// Outcome of the per-shot Bernoulli draws: true where the accepted
/// replacement was dropped (identity branch).
using ShotDraws = std::vector<bool>;

ShotDraws draw_shot(const ReplacementPlan& plan, Rng& rng);

/// Base circuit with the drawn substitutions applied, not simplified.
Circuit instantiate(const ReplacementPlan& plan, const ShotDraws& draws);

/// One stochastic instance: draw, substitute, best_simplify.
Circuit sample_instance(const ReplacementPlan& plan, Rng& rng);

struct ShotStatistics {
  double mean = 0.0;
  double std_error = 0.0;
  /// two-qubit count -> number of shots
  std::map<std::size_t, std::size_t> histogram;
};

inline constexpr std::size_t kDefaultShots = 8192;

/// Mean CNOT count over `n_shots` instances. Shot k uses the seed
/// derive_seed(seed, streams::kShots, k), so the result does not depend on
/// `workers` (0 picks the hardware concurrency).
ShotStatistics estimate_avg_two_qubit(const ReplacementPlan& plan,
                                      std::size_t n_shots, std::uint64_t seed,
                                      unsigned workers = 1);

}  // namespace qmix
