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

#include "qmix/simplify.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace qmix {

namespace {

// Internal form: S and ZPhase collapse into one diagonal node holding
// S^quarter Z_angle with angle normalized, so fusion is addition. Keeping
// the Clifford part as an integer makes re-simplifying an output exact.
enum class NodeKind : std::uint8_t { kCnot, kH, kDiag };

struct Node {
  NodeKind kind;
  int q0;
  int q1;
  int quarter;
  double angle;
  bool alive = true;
};

struct Diagonal {
  int quarter;
  double angle;
};

Diagonal fuse(int quarter, double angle) {
  const auto split = normalize_phase(angle);
  return {(quarter + split.s_power) % 4, split.alpha};
}

// Number of gates the diagonal expands to.
int diag_cost(int quarter, double angle) {
  return quarter + (std::abs(angle) > kZeroAngle ? 1 : 0);
}
int diag_cost(const Node& n) { return diag_cost(n.quarter, n.angle); }

bool disjoint(const Node& a, const Node& b) {
  auto touches = [](const Node& n, int q) { return q >= 0 && (n.q0 == q || n.q1 == q); };
  return !touches(b, a.q0) && !touches(b, a.q1);
}

// Whether `g` may move to the left of `h`.
bool commutes_past(const Node& g, const Node& h) {
  if (disjoint(g, h)) return true;
  switch (g.kind) {
    case NodeKind::kCnot:
      if (h.kind == NodeKind::kDiag) return h.q0 == g.q0;
      if (h.kind == NodeKind::kCnot)
        return (h.q0 == g.q0 && h.q1 != g.q1 && h.q1 != g.q0 && h.q0 != g.q1) ||
               (h.q1 == g.q1 && h.q0 != g.q0 && h.q0 != g.q1 && h.q1 != g.q0);
      return false;
    case NodeKind::kDiag:
      if (h.kind == NodeKind::kCnot) return h.q0 == g.q0;
      return h.kind == NodeKind::kDiag;
    case NodeKind::kH:
      return false;
  }
  return false;
}

std::vector<Node> to_nodes(const Circuit& c) {
  std::vector<Node> out;
  out.reserve(c.size());
  for (const auto& g : c.gates()) {
    switch (g.kind) {
      case GateKind::kCnot:
        out.push_back({NodeKind::kCnot, g.q0, g.q1, 0, 0.0});
        break;
      case GateKind::kH:
        out.push_back({NodeKind::kH, g.q0, -1, 0, 0.0});
        break;
      case GateKind::kS:
        out.push_back({NodeKind::kDiag, g.q0, -1, 1, 0.0});
        break;
      case GateKind::kZPhase:
        out.push_back({NodeKind::kDiag, g.q0, -1, 0, g.angle});
        break;
    }
  }
  return out;
}

Circuit to_circuit(int num_qubits, const std::vector<Node>& nodes) {
  Circuit c(num_qubits);
  c.reserve(nodes.size());
  for (const auto& n : nodes) {
    if (!n.alive) continue;
    switch (n.kind) {
      case NodeKind::kCnot:
        c.push(Gate::cnot(n.q0, n.q1));
        break;
      case NodeKind::kH:
        c.push(Gate::h(n.q0));
        break;
      case NodeKind::kDiag:
        for (int k = 0; k < n.quarter; ++k) c.push(Gate::s(n.q0));
        if (std::abs(n.angle) > kZeroAngle) c.push(Gate::zphase(n.q0, n.angle));
        break;
    }
  }
  return c;
}

// One left-to-right sweep. Each incoming node looks back through commuting
// live nodes for a partner to cancel or fuse with. Returns true on change.
bool rewrite_pass(std::vector<Node>& nodes, std::size_t window) {
  bool changed = false;
  std::vector<Node> out;
  out.reserve(nodes.size());
  for (const Node& g : nodes) {
    if (!g.alive) continue;
    if (g.kind == NodeKind::kDiag && diag_cost(g) == 0) {
      changed = true;
      continue;
    }
    bool absorbed = false;
    std::size_t seen = 0;
    for (std::size_t j = out.size(); j-- > 0 && seen < window;) {
      Node& h = out[j];
      if (!h.alive) continue;
      ++seen;
      if (h.kind == g.kind && h.q0 == g.q0 && h.q1 == g.q1) {
        if (g.kind != NodeKind::kDiag) {
          h.alive = false;
          absorbed = true;
          break;
        }
        const auto f = fuse(h.quarter + g.quarter, h.angle + g.angle);
        const int cost = diag_cost(f.quarter, f.angle);
        if (cost <= diag_cost(h) + diag_cost(g)) {
          h.quarter = f.quarter;
          h.angle = f.angle;
          if (cost == 0) h.alive = false;
          absorbed = true;
          break;
        }
      }
      if (!commutes_past(g, h)) break;
    }
    if (absorbed) {
      changed = true;
    } else {
      out.push_back(g);
    }
  }
  std::erase_if(out, [](const Node& n) { return !n.alive; });
  nodes = std::move(out);
  return changed;
}

// Moves every diagonal node left past commuting gates, stopping next to a
// diagonal on the same qubit. Gate order otherwise unchanged.
void push_diagonals_left(std::vector<Node>& nodes, std::size_t window) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].kind != NodeKind::kDiag) continue;
    std::size_t k = i;
    std::size_t steps = 0;
    while (k > 0 && steps < window) {
      const Node& prev = nodes[k - 1];
      if (prev.kind == NodeKind::kDiag && prev.q0 == nodes[k].q0) break;
      if (!commutes_past(nodes[k], prev)) break;
      std::swap(nodes[k - 1], nodes[k]);
      --k;
      ++steps;
    }
  }
}

}  // namespace

std::string_view strategy_label(StrategyName name) {
  return name == StrategyName::kBasic ? "basic" : "aggressive";
}

Circuit simplify(const Circuit& c, const Strategy& strategy) {
  auto nodes = to_nodes(c);
  for (std::size_t it = 0; it < strategy.max_iterations; ++it) {
    if (strategy.name == StrategyName::kAggressive)
      push_diagonals_left(nodes, strategy.window);
    if (!rewrite_pass(nodes, strategy.window)) break;
  }
  auto out = to_circuit(c.num_qubits(), nodes);
  // The guarded rewrites cannot grow the circuit; fall back to the input if
  // rounding in the expansion ever produced a longer gate list.
  if (out.size() > c.size()) return c;
  return out;
}

Circuit best_simplify(const Circuit& c) {
  Circuit best = simplify(c, Strategy::basic());
  Circuit alt = simplify(c, Strategy::aggressive());
  const auto key = [](const Circuit& x) {
    return std::pair{two_qubit_count(x), x.size()};
  };
  if (key(alt) < key(best)) best = std::move(alt);
  return best;
}

}  // namespace qmix
