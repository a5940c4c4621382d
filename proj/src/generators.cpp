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

#include "qmix/generators.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qmix/error.hpp"
#include "qmix/rng.hpp"

namespace qmix {

void GateProbabilities::validate() const {
  const double ps[] = {p_cnot, p_h, p_s, p_zphase};
  double sum = 0.0;
  for (double p : ps) {
    if (!(p >= 0.0 && p <= 1.0))
      throw ConfigError(fmt::format("gate probability {} outside [0, 1]", p));
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ConfigError(fmt::format("gate probabilities sum to {}, not 1", sum));
}

Circuit random_circuit(int num_qubits, std::size_t depth,
                       const GateProbabilities& probs, std::uint64_t seed) {
  probs.validate();
  if (num_qubits < 1) throw ConfigError("random circuit needs at least one qubit");
  if (probs.p_cnot > 0.0 && num_qubits < 2)
    throw ConfigError("CNOTs require at least two qubits");

  Rng rng(seed);
  Circuit c(num_qubits);
  c.reserve(depth);
  const auto n = static_cast<std::uint64_t>(num_qubits);
  const double weights[] = {probs.p_cnot, probs.p_h, probs.p_s, probs.p_zphase};
  int last_kind = 0;
  for (int k = 0; k < 4; ++k)
    if (weights[k] > 0.0) last_kind = k;
  for (std::size_t step = 0; step < depth; ++step) {
    const double u = rng.uniform();
    int kind = last_kind;
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
      acc += weights[k];
      if (weights[k] > 0.0 && u < acc) {
        kind = k;
        break;
      }
    }
    switch (kind) {
      case 0: {
        const int control = static_cast<int>(rng.uniform_int(n));
        int target = static_cast<int>(rng.uniform_int(n - 1));
        if (target >= control) ++target;
        c.cnot(control, target);
        break;
      }
      case 1:
        c.h(static_cast<int>(rng.uniform_int(n)));
        break;
      case 2:
        c.s(static_cast<int>(rng.uniform_int(n)));
        break;
      default: {
        const int q = static_cast<int>(rng.uniform_int(n));
        // uniform() is in [0, 1), so alpha lands in (-pi/4, pi/4].
        double alpha = kPi / 4 - (kPi / 2) * rng.uniform();
        if (!is_normalized_phase(alpha)) alpha = std::nextafter(-kPi / 4, 0.0);
        c.push(Gate::zphase(q, alpha));
      }
    }
  }
  return c;
}

void cp_decompose(Circuit& out, int target, int control, double alpha) {
  if (target == control)
    throw ConfigError("controlled phase needs distinct target and control");
  out.phase(target, alpha / 2);
  out.cnot(control, target);
  out.phase(target, -alpha / 2);
  out.cnot(control, target);
  out.phase(control, alpha / 2);
}

Circuit qft(int num_qubits) {
  if (num_qubits < 1) throw ConfigError("qft needs at least one qubit");
  Circuit c(num_qubits);
  for (int i = 0; i < num_qubits; ++i) {
    c.h(i);
    for (int j = i + 1; j < num_qubits; ++j)
      cp_decompose(c, i, j, kPi / std::ldexp(1.0, j - i));
  }
  return c;
}

}  // namespace qmix
