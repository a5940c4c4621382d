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

#include "qmix/sim.hpp"

#include <cmath>

#include "qmix/error.hpp"
#include "qmix/rng.hpp"

namespace qmix {

namespace {

using cd = std::complex<double>;

int register_qubits_of(const Eigen::VectorXcd& v) {
  const auto n = v.size();
  if (n <= 0 || (n & (n - 1)) != 0)
    throw ConfigError("state length must be a power of two");
  int q = 0;
  while ((Eigen::Index{1} << q) < n) ++q;
  return q;
}

void apply_h(cd* a, Eigen::Index n, int q) {
  const Eigen::Index bit = Eigen::Index{1} << q;
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i & bit) continue;
    const cd x = a[i], y = a[i | bit];
    a[i] = r * (x + y);
    a[i | bit] = r * (x - y);
  }
}

void apply_cnot(cd* a, Eigen::Index n, int control, int target) {
  const Eigen::Index cb = Eigen::Index{1} << control;
  const Eigen::Index tb = Eigen::Index{1} << target;
  for (Eigen::Index i = 0; i < n; ++i)
    if ((i & cb) && !(i & tb)) std::swap(a[i], a[i | tb]);
}

void apply_diag(cd* a, Eigen::Index n, int q, cd phase) {
  const Eigen::Index bit = Eigen::Index{1} << q;
  for (Eigen::Index i = 0; i < n; ++i)
    if (i & bit) a[i] *= phase;
}

cd diag_phase(const Gate& g) {
  return g.kind == GateKind::kS ? cd(0, 1) : std::polar(1.0, g.angle);
}

// Applies g (or its inverse) to the qubits starting at `offset`, optionally
// complex conjugated.
void apply_gate_at(cd* a, Eigen::Index n, const Gate& g, int offset,
                   bool conjugate, bool inverse) {
  switch (g.kind) {
    case GateKind::kCnot:
      apply_cnot(a, n, g.q0 + offset, g.q1 + offset);
      break;
    case GateKind::kH:
      apply_h(a, n, g.q0 + offset);
      break;
    case GateKind::kS:
    case GateKind::kZPhase: {
      cd ph = diag_phase(g);
      if (conjugate != inverse) ph = std::conj(ph);
      apply_diag(a, n, g.q0 + offset, ph);
      break;
    }
  }
}

// rho_xy *= m when (x_q, y_q) = (1, 0) and conj(m) when (0, 1).
void apply_offdiag_scale(cd* a, Eigen::Index n, int q, int register_qubits,
                         cd m) {
  const Eigen::Index rb = Eigen::Index{1} << q;
  const Eigen::Index cb = Eigen::Index{1} << (q + register_qubits);
  const cd mc = std::conj(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool r = i & rb, c = i & cb;
    if (r && !c) a[i] *= m;
    else if (!r && c) a[i] *= mc;
  }
}

void check_density_shape(const Eigen::VectorXcd& v, int register_qubits,
                         const Circuit& c) {
  if (c.num_qubits() > register_qubits)
    throw ConfigError("circuit wider than register");
  if (v.size() != (Eigen::Index{1} << (2 * register_qubits)))
    throw ConfigError("density vector has the wrong length");
}

}  // namespace

void apply_gate(Eigen::VectorXcd& state, const Gate& g) {
  const int n = register_qubits_of(state);
  if (g.q0 >= n || g.q1 >= n) throw ConfigError("gate outside register");
  apply_gate_at(state.data(), state.size(), g, 0, false, false);
}

void apply_circuit(Eigen::VectorXcd& state, const Circuit& c) {
  const int n = register_qubits_of(state);
  if (c.num_qubits() > n) throw ConfigError("circuit wider than register");
  for (const auto& g : c.gates())
    apply_gate_at(state.data(), state.size(), g, 0, false, false);
}

void apply_channel(Eigen::VectorXcd& rho_vec, int register_qubits,
                   const Circuit& c, std::span<const MixedSite> sites) {
  check_density_shape(rho_vec, register_qubits, c);
  cd* a = rho_vec.data();
  const Eigen::Index n = rho_vec.size();
  std::size_t next = 0;
  const auto gates = c.gates();
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const Gate& g = gates[k];
    if (next < sites.size() && sites[next].gate_index == k) {
      const auto& s = sites[next++];
      const cd m = s.p + (1.0 - s.p) * std::polar(1.0, s.theta);
      apply_offdiag_scale(a, n, g.q0, register_qubits, m);
      continue;
    }
    apply_gate_at(a, n, g, 0, false, false);
    apply_gate_at(a, n, g, register_qubits, true, false);
  }
  if (next != sites.size()) throw ConfigError("mixed sites not sorted or out of range");
}

void apply_adjoint_channel(Eigen::VectorXcd& x_vec, int register_qubits,
                           const Circuit& c, std::span<const MixedSite> sites) {
  check_density_shape(x_vec, register_qubits, c);
  cd* a = x_vec.data();
  const Eigen::Index n = x_vec.size();
  const auto gates = c.gates();
  std::size_t next = sites.size();
  for (std::size_t k = gates.size(); k-- > 0;) {
    const Gate& g = gates[k];
    if (next > 0 && sites[next - 1].gate_index == k) {
      const auto& s = sites[--next];
      const cd m = s.p + (1.0 - s.p) * std::polar(1.0, s.theta);
      apply_offdiag_scale(a, n, g.q0, register_qubits, std::conj(m));
      continue;
    }
    apply_gate_at(a, n, g, 0, false, true);
    apply_gate_at(a, n, g, register_qubits, true, true);
  }
  if (next != 0) throw ConfigError("mixed sites not sorted or out of range");
}

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw ConfigError("unvec: length mismatch");
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

double hermitian_trace_norm(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

Eigen::VectorXcd haar_state(Eigen::Index dim, Rng& rng) {
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(i) = cd(re, im);
  }
  return v / v.norm();
}

}  // namespace qmix
