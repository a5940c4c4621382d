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

#include <complex>
#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "qmix/circuit.hpp"

namespace qmix {

/// A gate position replaced by "identity with probability p, else Z_theta".
struct MixedSite {
  std::size_t gate_index = 0;
  double theta = 0.0;
  double p = 0.0;
};

// Dense simulation kernels. A state on an n-qubit register is a vector of
// 2^n amplitudes, bit q of the index holding qubit q. A density operator rho
// on n qubits is stored as vec(rho) (column stacking, index x + 2^n y), which
// is a 2n-qubit vector: row qubits 0..n-1, column qubits n..2n-1. Circuits
// may be narrower than the register; extra qubits act as an untouched
// ancilla.

void apply_gate(Eigen::VectorXcd& state, const Gate& g);

void apply_circuit(Eigen::VectorXcd& state, const Circuit& c);

/// rho -> E(rho) for the channel of `c` with `sites` swapped for mixtures.
/// `sites` must be sorted by gate_index.
void apply_channel(Eigen::VectorXcd& rho_vec, int register_qubits,
                   const Circuit& c, std::span<const MixedSite> sites = {});

/// X -> E^dagger(X), the Hilbert-Schmidt adjoint of apply_channel.
void apply_adjoint_channel(Eigen::VectorXcd& x_vec, int register_qubits,
                           const Circuit& c,
                           std::span<const MixedSite> sites = {});

/// Reshapes vec(rho) into the d x d matrix rho.
Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, Eigen::Index dim);
Eigen::VectorXcd vec(const Eigen::MatrixXcd& m);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double hermitian_trace_norm(const Eigen::MatrixXcd& h);

/// Haar-random unit vector of the given dimension.
class Rng;
Eigen::VectorXcd haar_state(Eigen::Index dim, Rng& rng);

}  // namespace qmix
