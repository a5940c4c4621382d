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
#include <string_view>

#include "qmix/circuit.hpp"

namespace qmix {

enum class StrategyName { kBasic, kAggressive };

/// Rewrite configuration for the peephole simplifier.
///
/// Every strategy applies inverse-pair cancellation (H H, CNOT CNOT),
/// fusion of diagonal gates on a qubit, and removal of zero rotations. A gate
/// looking for a partner may move backwards past gates on disjoint qubits,
/// past diagonal gates on a CNOT control, and past CNOTs sharing only their
/// control or only their target, within `window` live gates.
/// The aggressive strategy first pushes every diagonal gate as far left as
/// commutation allows and then runs the same rewrites.
struct Strategy {
  StrategyName name = StrategyName::kBasic;
  std::size_t window = 64;
  std::size_t max_iterations = 100;

  static Strategy basic() { return {}; }
  static Strategy aggressive() {
    Strategy s;
    s.name = StrategyName::kAggressive;
    return s;
  }
};

std::string_view strategy_label(StrategyName name);

/// Unitary-preserving (up to global phase) simplification. Never increases
/// the two-qubit count or the total gate count.
Circuit simplify(const Circuit& c, const Strategy& strategy);

/// Runs basic and aggressive and keeps the result with the fewest CNOTs,
/// then fewest gates, then the earlier strategy.
Circuit best_simplify(const Circuit& c);

}  // namespace qmix
