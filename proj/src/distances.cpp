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

#include "qmix/distances.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "qmix/circuit.hpp"
#include "qmix/error.hpp"
#include "qmix/rng.hpp"

namespace qmix {

namespace {

using cd = std::complex<double>;

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ConfigError(fmt::format("probability {} outside [0, 1]", p));
}

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw ConfigError(fmt::format("{} must be finite", what));
}

}  // namespace

void ReplacementChannelParams::validate() const {
  check_finite(alpha, "alpha");
  check_finite(theta, "theta");
  check_p(p);
}

cd replacement_offdiagonal(const ReplacementChannelParams& r) {
  r.validate();
  return std::polar(1.0, -r.alpha) - (1.0 - r.p) * std::polar(1.0, -r.theta) - r.p;
}

double diamond_distance_single(const ReplacementChannelParams& r) {
  return std::abs(replacement_offdiagonal(r));
}

double diamond_distance_single_radical(const ReplacementChannelParams& r) {
  r.validate();
  const double a = r.alpha, t = r.theta, p = r.p;
  const double inner = (p - 1) * std::sin(a) * std::sin(t) + p * p - p + 1 +
                       (p - 1) * (std::cos(a) - p) * std::cos(t) - p * std::cos(a);
  return std::sqrt(2.0) * std::sqrt(std::max(0.0, inner));
}

double min_diamond_distance(double alpha, double p) {
  check_finite(alpha, "alpha");
  check_p(p);
  const double s = std::sin(alpha / 2);
  const double s2 = 4.0 * p * s * s;
  const double q = 1.0 - p;
  const double r = std::sqrt(q * q + s2);
  if (r + q == 0.0) return 0.0;
  return s2 / (r + q);
}

double min_diamond_distance_radical(double alpha, double p) {
  check_finite(alpha, "alpha");
  check_p(p);
  const double c = std::cos(alpha);
  const double inner =
      1 - p + p * p - p * c - (1 - p) * std::sqrt(1 + p * p - 2 * p * c);
  return std::sqrt(2.0) * std::sqrt(std::max(0.0, inner));
}

double optimal_theta(double alpha, double p) {
  check_finite(alpha, "alpha");
  check_p(p);
  if (alpha == 0.0) return 0.0;
  if (p == 0.0) return alpha;
  // tan(theta/2) = (p - cos a + R) / sin a, with the numerator rewritten as
  // d_min + 2 sin^2(a/2) so that it stays accurate for tiny angles.
  const double s = std::sin(alpha / 2);
  const double numerator = min_diamond_distance(alpha, p) + 2.0 * s * s;
  return 2.0 * std::atan(numerator / std::sin(alpha));
}

namespace {

using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

struct SingleReplacement {
  Mat4 za;
  Mat4 zt;
  double p;

  explicit SingleReplacement(const ReplacementChannelParams& r) : p(r.p) {
    // System qubit is the first tensor factor: basis |s a> -> index 2 s + a.
    za.setZero();
    zt.setZero();
    for (int i = 0; i < 4; ++i) {
      const bool one = i >= 2;
      za(i, i) = one ? std::polar(1.0, r.alpha) : cd(1.0);
      zt(i, i) = one ? std::polar(1.0, r.theta) : cd(1.0);
    }
  }

  Mat4 difference(const Mat4& m) const {
    return za * m * za.adjoint() - p * m - (1 - p) * zt * m * zt.adjoint();
  }
  Mat4 adjoint_difference(const Mat4& x) const {
    return za.adjoint() * x * za - p * x - (1 - p) * zt.adjoint() * x * zt;
  }
};

double objective(const SingleReplacement& s, const Vec4& u) {
  const Vec4 v = u / u.norm();
  const Mat4 h = s.difference(v * v.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// One step of the monotone ascent: u <- top eigenvector of
// Delta^dagger(sign(Delta(u u^dagger))).
Vec4 ascent_step(const SingleReplacement& s, const Vec4& u) {
  const Mat4 h = s.difference(u * u.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4> es(h);
  Mat4 sign = Mat4::Zero();
  for (int k = 0; k < 4; ++k) {
    const double l = es.eigenvalues()(k);
    if (l == 0.0) continue;
    const Vec4 e = es.eigenvectors().col(k);
    sign += (l > 0 ? 1.0 : -1.0) * e * e.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Mat4> top(s.adjoint_difference(sign));
  return top.eigenvectors().col(3);
}

}  // namespace

BruteForceResult brute_force_diamond_single(const ReplacementChannelParams& r,
                                            int n_restarts, std::uint64_t seed) {
  r.validate();
  if (n_restarts < 1) throw ConfigError("need at least one restart");
  const SingleReplacement s(r);
  BruteForceResult best{-1.0, 0.0};
  Vec4 best_u;
  for (int restart = 0; restart < n_restarts; ++restart) {
    Rng rng(derive_seed(seed, streams::kRestarts, static_cast<std::uint64_t>(restart)));
    Vec4 u;
    for (int i = 0; i < 4; ++i) u(i) = cd(rng.normal(), rng.normal());
    u.normalize();
    double value = objective(s, u);
    for (int it = 0; it < 50; ++it) {
      const Vec4 next = ascent_step(s, u);
      const double v = objective(s, next);
      if (v <= value + 1e-15) break;
      u = next;
      value = v;
    }
    // Coordinate polish over the eight real parameters.
    for (double step = 0.1; step > 1e-9; step *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (int k = 0; k < 8; ++k) {
          for (double dir : {step, -step}) {
            Vec4 trial = u;
            trial(k / 2) += k % 2 ? cd(0, dir) : cd(dir, 0);
            trial.normalize();
            const double v = objective(s, trial);
            if (v > value + 1e-15) {
              u = trial;
              value = v;
              improved = true;
            }
          }
        }
      }
    }
    if (value > best.value) {
      best.value = value;
      best_u = u;
    }
  }
  best.weight_on_zero = std::norm(best_u(0)) + std::norm(best_u(1));
  return best;
}

double frobenius_avg_single(const ReplacementChannelParams& r) {
  return kPi / (4.0 * std::sqrt(2.0)) * diamond_distance_single(r);
}

double trace_avg_single(const ReplacementChannelParams& r) {
  return kPi / 4.0 * diamond_distance_single(r);
}

double avg_case_single(const ReplacementChannelParams& r) {
  return diamond_distance_single(r) / (2.0 * std::sqrt(2.0));
}

namespace {

using Mat2 = Eigen::Matrix2cd;

Mat2 random_qubit_state(Rng& rng) {
  const double a = rng.uniform();
  const double phi1 = 2 * kPi * rng.uniform();
  const double phi2 = 2 * kPi * rng.uniform();
  Eigen::Vector2cd psi(std::polar(std::sqrt(a), phi1),
                       std::polar(std::sqrt(1 - a), phi2));
  return psi * psi.adjoint();
}

Mat2 channel_difference(const ReplacementChannelParams& r, const Mat2& rho) {
  Mat2 za = Mat2::Identity(), zt = Mat2::Identity();
  za(1, 1) = std::polar(1.0, r.alpha);
  zt(1, 1) = std::polar(1.0, r.theta);
  return za * rho * za.adjoint() - r.p * rho - (1 - r.p) * zt * rho * zt.adjoint();
}

template <typename F>
MonteCarloEstimate monte_carlo(std::size_t n, std::uint64_t seed, F&& sample) {
  if (n == 0) throw ConfigError("need at least one sample");
  Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sample(rng);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / double(n);
  double var = n > 1 ? (sum_sq - double(n) * mean * mean) / double(n - 1) : 0.0;
  if (var < 0) var = 0;
  return {mean, std::sqrt(var / double(n))};
}

}  // namespace

MonteCarloEstimate haar_frobenius_mc_single(const ReplacementChannelParams& r,
                                            std::size_t n_samples,
                                            std::uint64_t seed) {
  r.validate();
  return monte_carlo(n_samples, seed, [&](Rng& rng) {
    return channel_difference(r, random_qubit_state(rng)).norm();
  });
}

MonteCarloEstimate haar_trace_mc_single(const ReplacementChannelParams& r,
                                        std::size_t n_samples,
                                        std::uint64_t seed) {
  r.validate();
  return monte_carlo(n_samples, seed, [&](Rng& rng) {
    const Mat2 d = channel_difference(r, random_qubit_state(rng));
    Eigen::SelfAdjointEigenSolver<Mat2> es(d, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  });
}

MonteCarloEstimate haar_sqrt_weight_mc(std::size_t n_samples, std::uint64_t seed) {
  return monte_carlo(n_samples, seed, [](Rng& rng) {
    const double a = rng.uniform();
    return std::sqrt(a * (1 - a));
  });
}

}  // namespace qmix
