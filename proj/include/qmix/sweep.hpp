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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qmix/circuit.hpp"
#include "qmix/verify.hpp"

namespace qmix {

/// One (epsilon, p, realization) row of a sweep.
struct SweepRecord {
  std::string circuit;
  int num_qubits = 0;
  double epsilon = 0.0;
  double p = 0.0;
  std::size_t realization = 0;
  std::size_t baseline_2q = 0;
  double mean_2q = 0.0;
  double stderr_2q = 0.0;
  std::size_t n_accepted = 0;
  double spent_budget = 0.0;
  double d_upper = 0.0;
  double d_lower_est = 0.0;
  double frobenius_mc = 0.0;
  double frobenius_mc_err = 0.0;
  std::uint64_t seed = 0;
};

/// Produces realization `index` of the input family from its seed.
using CircuitSource =
    std::function<Circuit(std::size_t index, std::uint64_t seed)>;

struct SweepConfig {
  std::string circuit_name;
  CircuitSource source;
  /// Deterministic families are evaluated once regardless of
  /// n_realizations.
  bool randomized = false;
  std::vector<double> epsilons;
  /// p == 1 runs the squashing baseline.
  std::vector<double> ps;
  std::size_t n_shots = 8192;
  std::size_t n_realizations = 1;
  std::uint64_t seed = 0;
  /// Distance columns to compute; 0 restarts / 0 states leave them NaN.
  int lower_bound_restarts = 0;
  std::size_t frobenius_states = 0;
  std::size_t frobenius_shots_per_state = 64;
  unsigned workers = 1;
};

/// Rows ordered by (epsilon index, p index, realization).
std::vector<SweepRecord> sweep(const SweepConfig& config);

/// Column header of the sweep CSV (no trailing newline).
std::string_view sweep_csv_header();
std::string sweep_csv_row(const SweepRecord& r);
std::string to_csv(const std::vector<SweepRecord>& rows);

/// Reads rows written by to_csv. Throws ParseError on malformed input.
std::vector<SweepRecord> parse_sweep_csv(std::string_view text);

}  // namespace qmix
