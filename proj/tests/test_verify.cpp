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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "qmix/distances.hpp"
#include "qmix/error.hpp"
#include "qmix/generators.hpp"
#include "qmix/rng.hpp"
#include "qmix/sim.hpp"
#include "qmix/simplify.hpp"
#include "qmix/verify.hpp"

using namespace qmix;
using oracle::Mat;
using cd = std::complex<double>;

namespace {

Circuit rqc(int n, std::size_t depth, std::uint64_t seed) {
  return random_circuit(n, depth, GateProbabilities{}, seed);
}

// Plan replacing the given phase-gate positions of `c` at probability p with
// their optimal substitutes.
ReplacementPlan manual_plan(const Circuit& c, std::vector<std::size_t> positions, double p) {
  ReplacementPlan plan;
  plan.base = c;
  plan.p = p;
  plan.epsilon = 10.0;
  std::sort(positions.begin(), positions.end());
  for (auto k : positions) {
    REQUIRE(c[k].kind == GateKind::kZPhase);
    const double a = c[k].angle;
    plan.accepted.push_back({k, a, min_diamond_distance(a, p), optimal_theta(a, p)});
    plan.spent += plan.accepted.back().d_min;
  }
  return plan;
}

std::vector<std::size_t> phase_positions(const Circuit& c) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k].kind == GateKind::kZPhase) out.push_back(k);
  return out;
}

// Weighted sum over all 2^k draw outcomes of the instance superoperators.
Mat enumerate_ensemble(const ReplacementPlan& plan) {
  const std::size_t k = plan.accepted.size();
  const Eigen::Index d = Eigen::Index{1} << plan.base.num_qubits();
  Mat sum = Mat::Zero(d * d, d * d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    ShotDraws draws(k);
    double w = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      draws[i] = (mask >> i) & 1;
      w *= draws[i] ? plan.p : 1 - plan.p;
    }
    sum += w * oracle::unitary_superop(oracle::kron_unitary(instantiate(plan, draws)));
  }
  return sum;
}

Mat random_density(int n, Rng& rng) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Mat a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = cd(rng.normal(), rng.normal());
  Mat rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST_CASE("identity circuit gives the identity superoperator") {
  for (int n : {1, 2, 3}) {
    const auto s = superoperator_of(Circuit(n));
    CHECK((s.matrix() - Superoperator::identity(n).matrix()).norm() < 1e-15);
    CHECK(s.choi().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("single phase gate matches its Kraus expansion") {
  // Z_a rho Z_a^dagger = c^2 rho + s^2 Z rho Z - i c s (Z rho - rho Z),
  // c = cos(a/2), s = sin(a/2).
  Rng rng(5);
  const Mat z = oracle::mat2(1, 0, 0, -1);
  for (double a : {0.1, -0.5, 0.7853, 2.0}) {
    Circuit circ(1);
    circ.phase(0, a);
    const auto s = superoperator_of(circ);
    const Mat rho = random_density(1, rng);
    const double c = std::cos(a / 2), sn = std::sin(a / 2);
    const Mat want = c * c * rho + sn * sn * z * rho * z - cd(0, c * sn) * (z * rho - rho * z);
    CHECK((s.apply(rho) - want).norm() < 1e-14);
  }
}

TEST_CASE("superoperators match the unitary oracle and are CPTP") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto c = rqc(3, 40, seed);
    const auto s = superoperator_of(c);
    CHECK((s.matrix() - oracle::unitary_superop(oracle::kron_unitary(c))).norm() < 1e-12);
    CHECK(s.is_trace_preserving());
    CHECK(s.is_completely_positive());
    const Mat j = s.choi();
    CHECK(j.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((j - j.adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("a non-CPTP map is detected") {
  Mat m = Superoperator::identity(1).matrix();
  m(0, 0) = 2.0;
  CHECK_FALSE(Superoperator(1, m).is_trace_preserving());
  Mat t = Mat::Zero(4, 4);  // transpose map: trace preserving, not CP
  t(0, 0) = t(3, 3) = 1.0;
  t(1, 2) = t(2, 1) = 1.0;
  const Superoperator transpose(1, t);
  CHECK(transpose.is_trace_preserving());
  CHECK_FALSE(transpose.is_completely_positive());
  CHECK_THROWS_AS(Superoperator(1, Mat::Identity(3, 3)), ConfigError);
}

TEST_CASE("mixed channel equals the explicit draw enumeration") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto c = rqc(3, 150, 40 + seed);
    auto pos = phase_positions(c);
    REQUIRE(pos.size() >= 3);
    pos.resize(3);
    const auto plan = manual_plan(c, pos, 0.3 + 0.15 * double(seed));
    const auto mixed = mixed_channel_superoperator(plan);
    CHECK((mixed.matrix() - enumerate_ensemble(plan)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(mixed.is_trace_preserving());
    CHECK(mixed.is_completely_positive());
  }
}

TEST_CASE("mixed channel of an empty plan is the base channel") {
  const auto c = rqc(3, 50, 8);
  const auto plan = manual_plan(c, {}, 0.5);
  CHECK((mixed_channel_superoperator(plan).matrix() - superoperator_of(c).matrix()).norm() < 1e-12);
}

TEST_CASE("single replacement on one qubit is the two-branch mixture") {
  Circuit c(1);
  c.phase(0, 0.6);
  const double p = 0.7;
  const auto plan = manual_plan(c, {0}, p);
  Circuit sub(1);
  sub.phase(0, plan.accepted[0].theta_tilde);
  const auto want = Superoperator::identity(1).mix(superoperator_of(sub), p);
  CHECK((mixed_channel_superoperator(plan).matrix() - want.matrix()).norm() < 1e-15);
}

TEST_CASE("avg-case distance of single replacements is |B| / (2 sqrt 2)") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = (rng.uniform() - 0.5) * 1.5;
    const double theta = (rng.uniform() - 0.5) * 6.0;
    const double p = rng.uniform();
    Circuit c(1);
    c.phase(0, a);
    ReplacementPlan plan = manual_plan(c, {0}, p);
    plan.accepted[0].theta_tilde = theta;
    const double got = avg_case_distance(superoperator_of(c), mixed_channel_superoperator(plan));
    const double b = oracle::abs_b(a, theta, p);
    CHECK(got == doctest::Approx(b / (2 * std::sqrt(2.0))).epsilon(1e-9));
    CHECK(got == doctest::Approx(avg_case_single({a, theta, p})).epsilon(1e-9));
  }
  const auto s = superoperator_of(rqc(2, 20, 1));
  CHECK(avg_case_distance(s, s) == 0.0);
  CHECK_THROWS_AS(avg_case_distance(s, superoperator_of(Circuit(1))), ConfigError);
}

TEST_CASE("avg-case distance is subadditive over disjoint replacements") {
  Circuit c(2);
  c.phase(0, 0.5);
  c.phase(1, -0.3);
  const double p = 0.6;
  const auto e = superoperator_of(c);
  const double both = avg_case_distance(e, mixed_channel_superoperator(manual_plan(c, {0, 1}, p)));
  const double first = avg_case_distance(e, mixed_channel_superoperator(manual_plan(c, {0}, p)));
  const double second = avg_case_distance(e, mixed_channel_superoperator(manual_plan(c, {1}, p)));
  CHECK(both <= first + second + 1e-12);
  CHECK(both > std::max(first, second));
}

TEST_CASE("avg-case distance satisfies the triangle inequality") {
  Rng rng(3);
  auto random_channel = [&](std::uint64_t seed) {
    auto e = superoperator_of(rqc(2, 20, seed));
    for (int k = 1; k < 3; ++k) e = e.mix(superoperator_of(rqc(2, 20, seed + 1000 * k)), rng.uniform());
    return e;
  };
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto a = random_channel(3 * t), b = random_channel(3 * t + 1), c = random_channel(3 * t + 2);
    CHECK(a.is_completely_positive());
    CHECK(avg_case_distance(a, c) <= avg_case_distance(a, b) + avg_case_distance(b, c) + 1e-9);
  }
}

TEST_CASE("upper bound is the spent budget") {
  const auto plan = plan_replacements(qft(6), 0.1, 0.7);
  CHECK(diamond_upper_bound(plan) == plan.spent);
  CHECK(diamond_upper_bound(plan) <= 0.1);
  CHECK(diamond_upper_bound(plan_replacements(qft(6), 0.0, 0.7)) == 0.0);
}

TEST_CASE("lower bound matches the single-replacement closed form") {
  for (double a : {0.1, -0.4, 0.78}) {
    for (double p : {0.2, 0.75}) {
      Circuit c(1);
      c.h(0);
      c.phase(0, a);
      c.h(0);
      auto plan = manual_plan(c, {1}, p);
      CHECK(diamond_lower_bound(plan, 4, 1) ==
            doctest::Approx(min_diamond_distance(a, p)).epsilon(1e-6));
      plan.accepted[0].theta_tilde = a + 0.3;
      CHECK(diamond_lower_bound(plan, 4, 1) ==
            doctest::Approx(oracle::abs_b(a, a + 0.3, p)).epsilon(1e-6));
    }
  }
  CHECK(diamond_lower_bound(manual_plan(qft(2), {}, 0.5)) == 0.0);
}

TEST_CASE("lower bound never exceeds the upper bound") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const int n = 2 + static_cast<int>(seed % 2);
    const auto plan = plan_replacements(rqc(n, 60, 70 + seed), 0.2, 0.6);
    const double lo = diamond_lower_bound(plan, 3, seed);
    CHECK(lo <= diamond_upper_bound(plan) + 1e-9);
    if (!plan.accepted.empty()) CHECK(lo > 0.0);
  }
}

TEST_CASE("sampled instances average to the mixed channel") {
  const auto c = rqc(3, 60, 123);
  auto pos = phase_positions(c);
  pos.resize(std::min<std::size_t>(pos.size(), 4));
  const auto plan = manual_plan(c, pos, 0.6);
  const std::size_t shots = 10000;
  Mat avg = Mat::Zero(64, 64);
  Rng rng(9);
  for (std::size_t k = 0; k < shots; ++k)
    avg += superoperator_of(sample_instance(plan, rng)).matrix();
  avg /= double(shots);
  // Entries are bounded by 1, so each has standard error at most 0.01.
  CHECK((avg - mixed_channel_superoperator(plan).matrix()).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("simplification preserves the channel") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    const auto c = rqc(n, 80, 300 + seed);
    CHECK((superoperator_of(best_simplify(c)).matrix() - superoperator_of(c).matrix())
              .cwiseAbs()
              .maxCoeff() < 1e-9);
  }
}

TEST_CASE("frobenius estimate of an empty plan is zero") {
  const auto plan = manual_plan(rqc(3, 40, 2), {}, 0.5);
  CHECK(frobenius_mc_full(plan, 4, 8, 1).mean == 0.0);
  CHECK(frobenius_mc_sampled(plan, 4, 8, 1).mean == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("frobenius estimate matches the superoperator oracle") {
  const auto c = rqc(2, 40, 77);
  auto pos = phase_positions(c);
  pos.resize(std::min<std::size_t>(pos.size(), 3));
  const auto plan = manual_plan(c, pos, 0.5);
  const Mat ens = enumerate_ensemble(plan);
  const Mat u = oracle::kron_unitary(c);
  const std::uint64_t seed = 2024;
  const std::size_t n_states = 6;
  double sum = 0.0;
  for (std::size_t s = 0; s < n_states; ++s) {
    Rng rng(derive_seed(seed, streams::kHaarStates, s));
    const Eigen::VectorXcd psi = haar_state(4, rng);
    const Eigen::VectorXcd target = u * psi;
    const Mat rho = psi * psi.adjoint();
    const Eigen::VectorXcd out = ens * Eigen::Map<const Eigen::VectorXcd>(rho.data(), 16);
    sum += (target * target.adjoint() - Eigen::Map<const Mat>(out.data(), 4, 4)).norm();
  }
  CHECK(frobenius_mc_full(plan, n_states, 1, seed).mean ==
        doctest::Approx(sum / double(n_states)).epsilon(1e-10));
}

TEST_CASE("sampled and density Frobenius paths agree") {
  const auto c = rqc(3, 80, 31);
  auto pos = phase_positions(c);
  pos.resize(std::min<std::size_t>(pos.size(), 5));
  const auto plan = manual_plan(c, pos, 0.5);
  const auto exact = frobenius_mc_full(plan, 8, 1, 5);
  const auto sampled = frobenius_mc_sampled(plan, 8, 1000, 5);
  REQUIRE(exact.mean > 0.05);
  CHECK(sampled.mean == doctest::Approx(exact.mean).epsilon(0.1));
}

TEST_CASE("dense computations enforce their caps") {
  CHECK_THROWS_AS(superoperator_of(qft(6)), CapExceeded);
  CHECK_THROWS_AS(mixed_channel_superoperator(manual_plan(qft(6), {}, 0.5)), CapExceeded);
  CHECK_THROWS_AS(diamond_lower_bound(plan_replacements(qft(5), 0.1, 0.5)), CapExceeded);
  CHECK_THROWS_AS(frobenius_mc_full(manual_plan(qft(2), {}, 0.5), 0, 1, 0), ConfigError);
}

TEST_CASE("distance report marks unavailable fields") {
  const auto small = plan_replacements(qft(3), 0.1, 0.6);
  const auto r = distance_report(small, ReportOptions{2, 4, 8, true}, 1);
  CHECK(r.d_upper == small.spent);
  CHECK(r.d_lower_est <= r.d_upper + 1e-9);
  CHECK(std::isfinite(r.frobenius_mc));
  CHECK(std::isfinite(r.avg_case));
  const auto wide = plan_replacements(qft(6), 0.1, 0.6);
  const auto w = distance_report(wide, ReportOptions{2, 2, 8, true}, 1);
  CHECK(std::isnan(w.d_lower_est));
  CHECK(std::isnan(w.avg_case));
  CHECK(std::isfinite(w.frobenius_mc));
}
