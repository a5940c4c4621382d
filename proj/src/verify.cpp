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

#include "qmix/verify.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "qmix/error.hpp"
#include "qmix/rng.hpp"
#include "qmix/sim.hpp"

namespace qmix {

namespace {

using cd = std::complex<double>;

void check_cap(int num_qubits, int cap, const char* what) {
  if (num_qubits > cap)
    throw CapExceeded(fmt::format("{} limited to {} qubits, circuit has {}", what,
                                  cap, num_qubits));
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Superoperator::Superoperator(int num_qubits, Eigen::MatrixXcd matrix)
    : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
  const Eigen::Index d2 = dim() * dim();
  if (matrix_.rows() != d2 || matrix_.cols() != d2)
    throw ConfigError("superoperator matrix has the wrong shape");
}

Superoperator Superoperator::identity(int num_qubits) {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return {num_qubits, Eigen::MatrixXcd::Identity(d * d, d * d)};
}

Eigen::MatrixXcd Superoperator::apply(const Eigen::MatrixXcd& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim())
    throw ConfigError("density matrix dimension mismatch");
  return unvec(matrix_ * vec(rho), dim());
}

Eigen::MatrixXcd Superoperator::choi() const {
  const Eigen::Index d = dim();
  Eigen::MatrixXcd j(d * d, d * d);
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y) {
      const Eigen::MatrixXcd e = unvec(matrix_.col(x + d * y), d);
      j.block(x * d, y * d, d, d) = e / static_cast<double>(d);
    }
  return j;
}

bool Superoperator::is_trace_preserving(double tol) const {
  const Eigen::Index d = dim();
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y) {
      const cd tr = unvec(matrix_.col(x + d * y), d).trace();
      if (std::abs(tr - (x == y ? 1.0 : 0.0)) > tol) return false;
    }
  return true;
}

bool Superoperator::is_completely_positive(double tol) const {
  const Eigen::MatrixXcd j = choi();
  if ((j - j.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(j, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Superoperator Superoperator::mix(const Superoperator& other, double w) const {
  if (other.num_qubits_ != num_qubits_) throw ConfigError("channel width mismatch");
  return {num_qubits_, w * matrix_ + (1.0 - w) * other.matrix_};
}

Superoperator superoperator_of(const Circuit& c, int max_qubits) {
  check_cap(c.num_qubits(), max_qubits, "superoperator");
  const Eigen::MatrixXcd u = unitary_of(c, max_qubits);
  // vec(U rho U^dagger) = (conj(U) (x) U) vec(rho) for column stacking.
  return {c.num_qubits(), kron(u.conjugate(), u)};
}

Superoperator mixed_channel_superoperator(const ReplacementPlan& plan,
                                          int max_qubits) {
  const int n = plan.base.num_qubits();
  check_cap(n, max_qubits, "superoperator");
  const auto sites = plan.mixed_sites();
  const Eigen::Index d2 = Eigen::Index{1} << (2 * n);
  Eigen::MatrixXcd m(d2, d2);
  Eigen::VectorXcd col(d2);
  for (Eigen::Index k = 0; k < d2; ++k) {
    col.setZero();
    col(k) = 1.0;
    apply_channel(col, n, plan.base, sites);
    m.col(k) = col;
  }
  return {n, std::move(m)};
}

double avg_case_distance(const Superoperator& e1, const Superoperator& e2) {
  if (e1.num_qubits() != e2.num_qubits())
    throw ConfigError("avg_case_distance: dimension mismatch");
  const Eigen::Index d = e1.dim();
  const double choi_sq = (e1.choi() - e2.choi()).squaredNorm();
  const Eigen::MatrixXcd tau = Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
  const Eigen::MatrixXcd diff = e1.apply(tau) - e2.apply(tau);
  const double tau_sq = (diff * diff).trace().real();
  return 0.5 * std::sqrt(choi_sq + std::max(0.0, tau_sq));
}

double diamond_upper_bound(const ReplacementPlan& plan) {
  double sum = 0.0;
  for (const auto& a : plan.accepted) sum += a.d_min;
  return sum;
}

namespace {

// Trace distance objective on system (x) ancilla for the base circuit versus
// the plan's ensemble channel, with its ascent direction.
class LowerBoundProblem {
 public:
  explicit LowerBoundProblem(const ReplacementPlan& plan)
      : plan_(plan), sites_(plan.mixed_sites()),
        n_(plan.base.num_qubits()), dim_(Eigen::Index{1} << (2 * n_)) {}

  Eigen::Index dim() const { return dim_; }

  Eigen::MatrixXcd difference(const Eigen::VectorXcd& u) const {
    Eigen::VectorXcd target = u;
    apply_circuit(target, plan_.base);
    Eigen::VectorXcd rho = vec(u * u.adjoint());
    apply_channel(rho, 2 * n_, plan_.base, sites_);
    Eigen::MatrixXcd h = target * target.adjoint() - unvec(rho, dim_);
    return 0.5 * (h + h.adjoint());
  }

  double value(const Eigen::VectorXcd& u) const {
    return hermitian_trace_norm(difference(u));
  }

  // Returns the value at u and the top eigenvector of
  // Delta^dagger(sign(Delta(u u^dagger))).
  std::pair<double, Eigen::VectorXcd> step(const Eigen::VectorXcd& u) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(difference(u));
    const auto& l = es.eigenvalues();
    Eigen::VectorXd signs(l.size());
    for (Eigen::Index k = 0; k < l.size(); ++k)
      signs(k) = l(k) > 0 ? 1.0 : (l(k) < 0 ? -1.0 : 0.0);
    const Eigen::MatrixXcd& v = es.eigenvectors();
    const Eigen::MatrixXcd sign = v * signs.asDiagonal() * v.adjoint();
    Eigen::VectorXcd a = vec(sign);
    Eigen::VectorXcd b = a;
    apply_adjoint_channel(a, 2 * n_, plan_.base, {});
    apply_adjoint_channel(b, 2 * n_, plan_.base, sites_);
    Eigen::MatrixXcd g = unvec(a - b, dim_);
    g = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> top(g);
    return {l.cwiseAbs().sum(), top.eigenvectors().col(dim_ - 1)};
  }

 private:
  const ReplacementPlan& plan_;
  std::vector<MixedSite> sites_;
  int n_;
  Eigen::Index dim_;
};

}  // namespace

double diamond_lower_bound(const ReplacementPlan& plan, int n_restarts,
                           std::uint64_t seed) {
  check_cap(plan.base.num_qubits(), kLowerBoundCap, "diamond lower bound");
  if (plan.accepted.empty()) return 0.0;
  if (n_restarts < 1) throw ConfigError("need at least one restart");
  const LowerBoundProblem problem(plan);
  const Eigen::Index dim = problem.dim();
  const Eigen::Index d = Eigen::Index{1} << plan.base.num_qubits();

  double best = 0.0;
  for (int restart = 0; restart < n_restarts; ++restart) {
    Eigen::VectorXcd u(dim);
    if (restart == 0) {
      // Maximally entangled start: sum_x |x>_sys |x>_anc.
      u.setZero();
      for (Eigen::Index x = 0; x < d; ++x) u(x + d * x) = 1.0;
      u.normalize();
    } else {
      Rng rng(derive_seed(seed, streams::kRestarts, static_cast<std::uint64_t>(restart)));
      u = haar_state(dim, rng);
    }
    double value = 0.0;
    for (int it = 0; it < 50; ++it) {
      auto [v, next] = problem.step(u);
      value = std::max(value, v);
      const double nv = problem.value(next);
      if (nv <= value * (1 + 1e-12) + 1e-15) break;
      u = std::move(next);
      value = nv;
    }
    best = std::max(best, value);
  }
  return best;
}

MonteCarloEstimate frobenius_mc_sampled(const ReplacementPlan& plan,
                                        std::size_t n_states,
                                        std::size_t n_shots_per_state,
                                        std::uint64_t seed) {
  if (n_states == 0 || n_shots_per_state == 0)
    throw ConfigError("need at least one state and one shot");
  const int n = plan.base.num_qubits();
  const Eigen::Index d = Eigen::Index{1} << n;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < n_states; ++s) {
    Rng state_rng(derive_seed(seed, streams::kHaarStates, s));
    const Eigen::VectorXcd psi = haar_state(d, state_rng);
    Eigen::VectorXcd target = psi;
    apply_circuit(target, plan.base);
    Eigen::MatrixXcd outs(d, static_cast<Eigen::Index>(n_shots_per_state));
    for (std::size_t k = 0; k < n_shots_per_state; ++k) {
      Rng rng(derive_seed(derive_seed(seed, streams::kHaarStates, s), streams::kShots, k));
      Eigen::VectorXcd phi = psi;
      apply_circuit(phi, instantiate(plan, draw_shot(plan, rng)));
      outs.col(static_cast<Eigen::Index>(k)) = phi;
    }
    const double m = static_cast<double>(n_shots_per_state);
    const Eigen::VectorXcd overlaps = outs.adjoint() * target;
    const Eigen::MatrixXcd gram = outs.adjoint() * outs;
    const double sq = 1.0 - 2.0 * overlaps.squaredNorm() / m + gram.squaredNorm() / (m * m);
    const double f = std::sqrt(std::max(0.0, sq));
    sum += f;
    sum_sq += f * f;
  }
  const double k = static_cast<double>(n_states);
  const double mean = sum / k;
  const double var = n_states > 1 ? std::max(0.0, (sum_sq - k * mean * mean) / (k - 1)) : 0.0;
  return {mean, std::sqrt(var / k)};
}

MonteCarloEstimate frobenius_mc_full(const ReplacementPlan& plan,
                                     std::size_t n_states,
                                     std::size_t n_shots_per_state,
                                     std::uint64_t seed) {
  const int n = plan.base.num_qubits();
  if (n > kDensityCap) return frobenius_mc_sampled(plan, n_states, n_shots_per_state, seed);
  if (n_states == 0) throw ConfigError("need at least one state");
  if (plan.accepted.empty()) return {0.0, 0.0};
  const auto sites = plan.mixed_sites();
  const Eigen::Index d = Eigen::Index{1} << n;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < n_states; ++s) {
    Rng rng(derive_seed(seed, streams::kHaarStates, s));
    const Eigen::VectorXcd psi = haar_state(d, rng);
    Eigen::VectorXcd target = psi;
    apply_circuit(target, plan.base);
    Eigen::VectorXcd rho = vec(psi * psi.adjoint());
    apply_channel(rho, n, plan.base, sites);
    const double f = (target * target.adjoint() - unvec(rho, d)).norm();
    sum += f;
    sum_sq += f * f;
  }
  const double k = static_cast<double>(n_states);
  const double mean = sum / k;
  const double var = n_states > 1 ? std::max(0.0, (sum_sq - k * mean * mean) / (k - 1)) : 0.0;
  return {mean, std::sqrt(var / k)};
}

DistanceReport distance_report(const ReplacementPlan& plan,
                               const ReportOptions& options,
                               std::uint64_t seed) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const int n = plan.base.num_qubits();
  DistanceReport r{diamond_upper_bound(plan), nan, nan, nan, nan};
  if (options.lower_bound_restarts > 0 && n <= kLowerBoundCap)
    r.d_lower_est = diamond_lower_bound(plan, options.lower_bound_restarts, seed);
  if (options.frobenius_states > 0) {
    const auto f = frobenius_mc_full(plan, options.frobenius_states,
                                     options.frobenius_shots_per_state, seed);
    r.frobenius_mc = f.mean;
    r.frobenius_mc_err = f.std_error;
  }
  if (options.avg_case && n <= kLowerBoundCap)
    r.avg_case = avg_case_distance(superoperator_of(plan.base),
                                   mixed_channel_superoperator(plan));
  return r;
}

}  // namespace qmix
