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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qmix {

inline constexpr double kPi = 3.14159265358979323846;

/// Angles at or below this magnitude are treated as the identity rotation.
inline constexpr double kZeroAngle = 1e-14;

/// Z_beta split into S^s_power followed by Z_alpha with alpha in (-pi/4, pi/4].
struct PhaseSplit {
  int s_power = 0;
  double alpha = 0.0;

  friend bool operator==(const PhaseSplit&, const PhaseSplit&) = default;
};

/// Splits an arbitrary Z rotation into Clifford S gates plus a small phase.
/// Throws ConfigError for non-finite input.
PhaseSplit normalize_phase(double beta);

/// True when `alpha` lies in the half-open interval (-pi/4, pi/4].
bool is_normalized_phase(double alpha);

enum class GateKind : std::uint8_t { kCnot, kH, kS, kZPhase };

/// One gate of the {CNOT, H, S, Z_alpha} set.
///
/// For CNOT `q0` is the control and `q1` the target; single-qubit gates use
/// `q0` only. `angle` is meaningful for ZPhase and is always normalized.
struct Gate {
  GateKind kind = GateKind::kH;
  int q0 = 0;
  int q1 = -1;
  double angle = 0.0;

  static Gate cnot(int control, int target);
  static Gate h(int qubit);
  static Gate s(int qubit);
  /// Requires a normalized angle; use Circuit::phase for arbitrary rotations.
  static Gate zphase(int qubit, double angle);

  bool is_two_qubit() const { return kind == GateKind::kCnot; }
  bool is_diagonal() const {
    return kind == GateKind::kS || kind == GateKind::kZPhase;
  }
  bool acts_on(int qubit) const { return q0 == qubit || q1 == qubit; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Ordered gate list over a fixed number of qubits. Gates are stored in
/// execution order (the first gate acts first).
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::span<const Gate> gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  const Gate& operator[](std::size_t i) const { return gates_[i]; }

  Circuit& cnot(int control, int target);
  Circuit& h(int qubit);
  Circuit& s(int qubit);
  /// Appends Z_beta for arbitrary beta, expanded into S gates plus a
  /// normalized Z phase. Zero rotations append nothing.
  Circuit& phase(int qubit, double beta);
  /// Appends a validated gate.
  Circuit& push(const Gate& gate);
  /// Appends every gate of `other`; widths must match.
  Circuit& append(const Circuit& other);

  void reserve(std::size_t n) { gates_.reserve(n); }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  void check_qubit(int qubit) const;

  int num_qubits_ = 0;
  std::vector<Gate> gates_;
};

std::size_t two_qubit_count(const Circuit& c);

/// Number of ZPhase gates.
std::size_t phase_gate_count(const Circuit& c);

/// Reversed circuit with every gate inverted. S^dagger is emitted as S S S.
Circuit invert(const Circuit& c);

inline constexpr int kDefaultUnitaryCap = 10;

/// Dense 2^L x 2^L unitary. Basis index bit q holds qubit q (little-endian).
/// Throws CapExceeded when L > max_qubits.
Eigen::MatrixXcd unitary_of(const Circuit& c,
                            int max_qubits = kDefaultUnitaryCap);

/// |tr(A^dagger B)| / dim, equal to 1 iff A and B agree up to global phase
/// (for unitaries).
double phase_insensitive_overlap(const Eigen::MatrixXcd& a,
                                 const Eigen::MatrixXcd& b);

/// Text format: optional `qubits L` header, then one gate per line
/// (`cnot c t`, `h q`, `s q`, `sdg q`, `zphase q angle`). `#` starts a comment.
Circuit parse(std::string_view text);
std::string serialize(const Circuit& c);

Circuit read_circuit_file(const std::string& path);
void write_circuit_file(const std::string& path, const Circuit& c);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace qmix
