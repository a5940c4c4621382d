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
#include <cstdint>

namespace qmix {

/// Replacement of Z_alpha by the mixture "identity with probability p,
/// Z_theta otherwise".
struct ReplacementChannelParams {
  double alpha = 0.0;
  double theta = 0.0;
  double p = 0.0;

  /// Throws ConfigError for non-finite values or p outside [0, 1].
  void validate() const;
};

/// B = e^{-i alpha} - (1-p) e^{-i theta} - p. The difference of the two
/// channels only rescales the off-diagonal of a qubit, by B.
std::complex<double> replacement_offdiagonal(const ReplacementChannelParams& r);

/// Diamond distance between Z_alpha and the mixture, |B|.
double diamond_distance_single(const ReplacementChannelParams& r);

/// Same quantity in the expanded real-trigonometric form. Kept as a
/// cross-check; it loses precision near zero.
double diamond_distance_single_radical(const ReplacementChannelParams& r);

/// Over-rotation minimizing the diamond distance for fixed (alpha, p).
/// Returns alpha for p == 0 and 0 for alpha == 0.
double optimal_theta(double alpha, double p);

/// Minimum over theta of the diamond distance. Evaluated as
/// 4 p sin^2(alpha/2) / (R + 1 - p) with R^2 = (1-p)^2 + 4 p sin^2(alpha/2),
/// which equals the closed form R - (1 - p) without cancellation.
double min_diamond_distance(double alpha, double p);

/// The closed form written with nested radicals, for cross-checks.
double min_diamond_distance_radical(double alpha, double p);

/// Lower bound on the diamond distance from direct maximization of
/// ||(Z_alpha x I - E x I)(|u><u|)||_1 over unit vectors u in C^4.
///
/// Uses `n_restarts` random starts, each refined by the monotone
/// top-eigenvector iteration and a coordinate polish. Built from explicit
/// 4x4 matrices, independent of the closed forms above.
struct BruteForceResult {
  double value = 0.0;
  /// |u_1|^2 + |u_2|^2 at the best point (weight on the system's |0>).
  double weight_on_zero = 0.0;
};
BruteForceResult brute_force_diamond_single(const ReplacementChannelParams& r,
                                            int n_restarts = 32,
                                            std::uint64_t seed = 0);

/// Haar-averaged Frobenius distance, (pi / (4 sqrt 2)) |B|.
double frobenius_avg_single(const ReplacementChannelParams& r);
/// Haar-averaged trace distance, (pi / 4) |B|.
double trace_avg_single(const ReplacementChannelParams& r);
/// Choi-based average-case distance, |B| / (2 sqrt 2).
double avg_case_single(const ReplacementChannelParams& r);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo over single-qubit Haar states psi = (e^{i phi1} sqrt a,
/// e^{i phi2} sqrt(1-a)) with a, phi1, phi2 uniform.
MonteCarloEstimate haar_frobenius_mc_single(const ReplacementChannelParams& r,
                                            std::size_t n_samples,
                                            std::uint64_t seed);
MonteCarloEstimate haar_trace_mc_single(const ReplacementChannelParams& r,
                                        std::size_t n_samples,
                                        std::uint64_t seed);
/// Estimate of E[sqrt(a (1 - a))] for a uniform on [0, 1].
MonteCarloEstimate haar_sqrt_weight_mc(std::size_t n_samples,
                                       std::uint64_t seed);

}  // namespace qmix
