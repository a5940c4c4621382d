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

#include "qmix/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "qmix/distances.hpp"
#include "qmix/error.hpp"
#include "qmix/simplify.hpp"

namespace qmix {

std::vector<MixedSite> ReplacementPlan::mixed_sites() const {
  const double q = mode == ReplacementMode::kSquash ? 1.0 : p;
  std::vector<MixedSite> sites;
  sites.reserve(accepted.size());
  for (const auto& a : accepted) sites.push_back({a.gate_index, a.theta_tilde, q});
  std::sort(sites.begin(), sites.end(),
            [](const MixedSite& x, const MixedSite& y) { return x.gate_index < y.gate_index; });
  return sites;
}

std::vector<ReplacementCandidate> rank_candidates(const Circuit& c, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ConfigError(fmt::format("probability {} outside [0, 1]", p));
  std::vector<ReplacementCandidate> out;
  const auto gates = c.gates();
  for (std::size_t k = 0; k < gates.size(); ++k) {
    if (gates[k].kind != GateKind::kZPhase) continue;
    const double a = gates[k].angle;
    out.push_back({k, a, min_diamond_distance(a, p), p < 1.0 ? optimal_theta(a, p) : 0.0});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ReplacementCandidate& x, const ReplacementCandidate& y) {
                     if (x.d_min != y.d_min) return x.d_min < y.d_min;
                     return x.gate_index < y.gate_index;
                   });
  return out;
}

namespace {

Circuit with_squashed(const Circuit& base, const std::vector<bool>& dropped) {
  Circuit out(base.num_qubits());
  out.reserve(base.size());
  const auto gates = base.gates();
  for (std::size_t k = 0; k < gates.size(); ++k)
    if (!dropped[k]) out.push(gates[k]);
  return out;
}

ReplacementPlan greedy_plan(const Circuit& c, double epsilon, double p,
                            ReplacementMode mode) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw ConfigError(fmt::format("error budget {} must be finite and >= 0", epsilon));
  ReplacementPlan plan;
  plan.base = c;
  plan.p = p;
  plan.epsilon = epsilon;
  plan.mode = mode;
  plan.baseline_2q = two_qubit_count(best_simplify(c));
  plan.squashed_2q = plan.baseline_2q;

  std::vector<bool> dropped(c.size(), false);
  for (const auto& cand : rank_candidates(c, p)) {
    // Ranked ascending, so nothing after the first misfit fits either.
    if (plan.spent + cand.d_min > epsilon) break;
    dropped[cand.gate_index] = true;
    const std::size_t count = two_qubit_count(best_simplify(with_squashed(c, dropped)));
    if (count < plan.squashed_2q) {
      plan.accepted.push_back(cand);
      plan.spent += cand.d_min;
      plan.squashed_2q = count;
    } else {
      dropped[cand.gate_index] = false;
    }
  }
  return plan;
}

}  // namespace

ReplacementPlan plan_replacements(const Circuit& c, double epsilon, double p) {
  if (!(p >= 0.0 && p < 1.0))
    throw ConfigError(fmt::format(
        "replacement probability {} must be in [0, 1); use squash mode for p = 1", p));
  return greedy_plan(c, epsilon, p, ReplacementMode::kMixture);
}

ReplacementPlan plan_squash(const Circuit& c, double epsilon) {
  return greedy_plan(c, epsilon, 1.0, ReplacementMode::kSquash);
}

ShotDraws draw_shot(const ReplacementPlan& plan, Rng& rng) {
  ShotDraws draws(plan.accepted.size());
  for (std::size_t k = 0; k < draws.size(); ++k)
    draws[k] = plan.mode == ReplacementMode::kSquash || rng.bernoulli(plan.p);
  return draws;
}

Circuit instantiate(const ReplacementPlan& plan, const ShotDraws& draws) {
  if (draws.size() != plan.accepted.size())
    throw ConfigError("draw count does not match the accepted list");
  // Per base gate: -1 keep, 0 drop, 1 over-rotate with theta of entry k.
  std::vector<int> action(plan.base.size(), -1);
  std::vector<double> theta(plan.base.size(), 0.0);
  for (std::size_t k = 0; k < draws.size(); ++k) {
    const auto& a = plan.accepted[k];
    action[a.gate_index] = draws[k] ? 0 : 1;
    theta[a.gate_index] = a.theta_tilde;
  }
  Circuit out(plan.base.num_qubits());
  out.reserve(plan.base.size() + 3);
  const auto gates = plan.base.gates();
  for (std::size_t k = 0; k < gates.size(); ++k) {
    if (action[k] == -1) {
      out.push(gates[k]);
    } else if (action[k] == 1) {
      out.phase(gates[k].q0, theta[k]);
    }
  }
  return out;
}

Circuit sample_instance(const ReplacementPlan& plan, Rng& rng) {
  return best_simplify(instantiate(plan, draw_shot(plan, rng)));
}

ShotStatistics estimate_avg_two_qubit(const ReplacementPlan& plan,
                                      std::size_t n_shots, std::uint64_t seed,
                                      unsigned workers) {
  if (n_shots == 0) throw ConfigError("need at least one shot");
  std::vector<std::size_t> counts(n_shots, plan.baseline_2q);
  if (!plan.accepted.empty()) {
    auto run = [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        Rng rng(derive_seed(seed, streams::kShots, k));
        counts[k] = two_qubit_count(sample_instance(plan, rng));
      }
    };
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_shots));
    if (workers <= 1) {
      run(0, n_shots);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (n_shots + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk, e = std::min(n_shots, b + chunk);
        if (b < e) pool.emplace_back(run, b, e);
      }
      for (auto& t : pool) t.join();
    }
  }
  ShotStatistics stats;
  double sum = 0.0;
  for (auto c : counts) {
    sum += static_cast<double>(c);
    ++stats.histogram[c];
  }
  stats.mean = sum / static_cast<double>(n_shots);
  if (n_shots > 1) {
    double ss = 0.0;
    for (auto c : counts) ss += (double(c) - stats.mean) * (double(c) - stats.mean);
    stats.std_error = std::sqrt(ss / double(n_shots - 1) / double(n_shots));
  }
  return stats;
}

}  // namespace qmix
