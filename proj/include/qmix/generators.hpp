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

#include <array>
#include <cstdint>

#include "qmix/circuit.hpp"

namespace qmix {

/// Per-step gate-kind probabilities for random circuits.
struct GateProbabilities {
  double p_cnot = 0.5;
  double p_h = 0.3;
  double p_s = 0.1;
  double p_zphase = 0.1;

  /// Throws ConfigError unless every entry is in [0,1] and they sum to 1.
  void validate() const;
};

/// Random circuit of exactly `depth` gates. Each step draws the gate kind
/// from `probs`; CNOT endpoints are an ordered pair of distinct qubits drawn
/// uniformly, single-qubit gates pick a uniform qubit, and Z phases are
/// uniform on (-pi/4, pi/4].
Circuit random_circuit(int num_qubits, std::size_t depth,
                       const GateProbabilities& probs, std::uint64_t seed);

/// Controlled phase with target `target` and control `control`, as five
/// gates in execution order:
///   Z_{a/2}(target), CNOT(control, target), Z_{-a/2}(target),
///   CNOT(control, target), Z_{a/2}(control)
/// Phases are expanded through Circuit::phase, so Clifford parts may appear
/// as S gates. Throws ConfigError when target == control.
void cp_decompose(Circuit& out, int target, int control, double alpha);

/// Fourier transform on L qubits without the final swap network: for each
/// qubit i, H(i) followed by controlled phases pi/2^(j-i) from every j > i.
Circuit qft(int num_qubits);

}  // namespace qmix
