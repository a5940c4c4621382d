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

#include <array>

#include "oracles.hpp"
#include "qmix/error.hpp"
#include "qmix/generators.hpp"
#include "qmix/rng.hpp"

using namespace qmix;

TEST_CASE("default gate probabilities") {
  const GateProbabilities p;
  CHECK(p.p_cnot == 0.5);
  CHECK(p.p_h == 0.3);
  CHECK(p.p_s == 0.1);
  CHECK(p.p_zphase == 0.1);
  CHECK_NOTHROW(p.validate());
  CHECK_THROWS_AS((GateProbabilities{0.5, 0.5, 0.1, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((GateProbabilities{1.2, -0.2, 0.0, 0.0}.validate()), ConfigError);
}

TEST_CASE("random_circuit shape") {
  CHECK(random_circuit(4, 0, {}, 1).empty());
  const auto c = random_circuit(8, 500, {}, 3);
  CHECK(c.size() == 500);
  CHECK(c.num_qubits() == 8);
  for (const auto& g : c.gates())
    if (g.kind == GateKind::kZPhase) REQUIRE(is_normalized_phase(g.angle));
  CHECK_THROWS_AS(random_circuit(1, 10, {}, 1), ConfigError);
  CHECK_NOTHROW(random_circuit(1, 10, {0.0, 0.5, 0.25, 0.25}, 1));
}

TEST_CASE("random_circuit is deterministic in its seed") {
  const auto a = serialize(random_circuit(8, 300, {}, 42));
  const auto b = serialize(random_circuit(8, 300, {}, 42));
  const auto c = serialize(random_circuit(8, 300, {}, 43));
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("random_circuit gate-kind frequencies (chi-square, 3 dof)") {
  const GateProbabilities probs;
  const auto c = random_circuit(8, 100000, probs, 2024);
  std::array<double, 4> counts{};
  for (const auto& g : c.gates()) counts[static_cast<int>(g.kind)] += 1;
  // GateKind order: kCnot, kH, kS, kZPhase.
  const std::array<double, 4> expected = {0.5, 0.3, 0.1, 0.1};
  double chi2 = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double e = expected[k] * 100000.0;
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
  }
  // Upper 0.001 quantile of chi-square with 3 degrees of freedom.
  CHECK(chi2 < 16.266);
}

TEST_CASE("random_circuit CNOT endpoints are distinct and cover all pairs") {
  const auto c = random_circuit(3, 20000, {}, 5);
  std::array<std::array<int, 3>, 3> seen{};
  for (const auto& g : c.gates())
    if (g.kind == GateKind::kCnot) {
      REQUIRE(g.q0 != g.q1);
      ++seen[g.q0][g.q1];
    }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) CHECK(seen[a][b] > 1400);
}

TEST_CASE("cp_decompose layout") {
  Circuit c(3);
  cp_decompose(c, 2, 0, 0.4);
  REQUIRE(c.size() == 5);
  CHECK(c[0] == Gate::zphase(2, 0.2));
  CHECK(c[1] == Gate::cnot(0, 2));
  CHECK(c[2] == Gate::zphase(2, -0.2));
  CHECK(c[3] == Gate::cnot(0, 2));
  CHECK(c[4] == Gate::zphase(0, 0.2));
  CHECK(two_qubit_count(c) == 2);
  CHECK_THROWS_AS(cp_decompose(c, 1, 1, 0.3), ConfigError);

  Circuit half(2);
  cp_decompose(half, 0, 1, kPi / 2);
  oracle::Mat want = oracle::Mat::Identity(4, 4);
  want(3, 3) = {0.0, 1.0};
  CHECK(oracle::overlap(oracle::kron_unitary(half), want) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("qft gate counts") {
  const auto one = qft(1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Gate::h(0));
  for (int n : {2, 3, 5, 8, 24}) CHECK(two_qubit_count(qft(n)) == std::size_t(n * (n - 1)));
  CHECK(two_qubit_count(qft(8)) == 56);
  CHECK(two_qubit_count(qft(24)) == 552);
}

TEST_CASE("qft unitary is the DFT with bit-reversed input") {
  // With bit q of the basis index holding qubit q, the swap-free circuit
  // equals F * R where R reverses the bit order.
  for (int n : {1, 2, 3, 4}) {
    const auto u = oracle::kron_unitary(qft(n));
    const oracle::Mat want = oracle::dft(n) * oracle::bit_reversal(n);
    CHECK(oracle::overlap(u, want) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // The plain DFT does not match at L = 3, pinning the convention.
  CHECK(oracle::overlap(oracle::kron_unitary(qft(3)), oracle::dft(3)) < 0.99);
}
