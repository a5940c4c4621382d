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

#include <Eigen/Dense>

#include "qmix/circuit.hpp"
#include "qmix/distances.hpp"
#include "qmix/protocol.hpp"

namespace qmix {

inline constexpr int kSuperoperatorCap = 5;
inline constexpr int kLowerBoundCap = 4;
inline constexpr int kDensityCap = 10;

/// Channel on d = 2^L dimensional states as a d^2 x d^2 matrix acting on
/// vec(rho) (column stacking).
class Superoperator {
 public:
  Superoperator(int num_qubits, Eigen::MatrixXcd matrix);

  static Superoperator identity(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return Eigen::Index{1} << num_qubits_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

  /// Choi state (1/d) sum_ij |i><j| (x) E(|i><j|); unit trace.
  Eigen::MatrixXcd choi() const;

  bool is_trace_preserving(double tol = 1e-9) const;
  bool is_completely_positive(double tol = 1e-9) const;

  /// Channel mixture w * this + (1 - w) * other.
  Superoperator mix(const Superoperator& other, double w) const;

 private:
  int num_qubits_;
  Eigen::MatrixXcd matrix_;
};

/// Throws CapExceeded when L > max_qubits.
Superoperator superoperator_of(const Circuit& c,
                               int max_qubits = kSuperoperatorCap);

/// Exact ensemble channel of a plan: accepted positions become
/// p * Id + (1 - p) * Z_theta_tilde. Squash plans use p = 1.
Superoperator mixed_channel_superoperator(const ReplacementPlan& plan,
                                          int max_qubits = kSuperoperatorCap);

/// (1/2) sqrt(||J1 - J2||_F^2 + tr[(E1(tau) - E2(tau))^2]), tau = I/d.
double avg_case_distance(const Superoperator& e1, const Superoperator& e2);

/// Sum of accepted per-replacement distances; equals plan.spent.
double diamond_upper_bound(const ReplacementPlan& plan);

/// Certified lower bound on the diamond distance between the base circuit's
/// channel and the plan's ensemble channel: the best trace distance found
/// over pure inputs on system (x) ancilla. Requires L <= kLowerBoundCap.
double diamond_lower_bound(const ReplacementPlan& plan, int n_restarts = 8,
                           std::uint64_t seed = 0);

/// Monte Carlo estimate of E || U psi psi^dagger U^dagger - E(psi psi^dagger) ||_F
/// over Haar states. For L <= kDensityCap the ensemble channel is applied
/// exactly to the density matrix; beyond that it is approximated by the
/// average of `n_shots_per_state` sampled instances.
MonteCarloEstimate frobenius_mc_full(const ReplacementPlan& plan,
                                     std::size_t n_states,
                                     std::size_t n_shots_per_state,
                                     std::uint64_t seed);

/// Instance-averaging estimator, usable at any width.
MonteCarloEstimate frobenius_mc_sampled(const ReplacementPlan& plan,
                                        std::size_t n_states,
                                        std::size_t n_shots_per_state,
                                        std::uint64_t seed);

/// Distance summary for a plan. Unavailable fields are NaN.
struct DistanceReport {
  double d_upper = 0.0;
  double d_lower_est = 0.0;
  double frobenius_mc = 0.0;
  double frobenius_mc_err = 0.0;
  double avg_case = 0.0;
};

struct ReportOptions {
  int lower_bound_restarts = 8;
  std::size_t frobenius_states = 32;
  std::size_t frobenius_shots_per_state = 64;
  bool avg_case = true;
};

DistanceReport distance_report(const ReplacementPlan& plan,
                               const ReportOptions& options,
                               std::uint64_t seed);

}  // namespace qmix
