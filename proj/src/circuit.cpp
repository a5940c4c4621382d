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

#include "qmix/circuit.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "qmix/error.hpp"
#include "qmix/sim.hpp"

namespace qmix {

namespace {

constexpr double kHalfPi = kPi / 2;
constexpr double kQuarterPi = kPi / 4;

}  // namespace

bool is_normalized_phase(double alpha) {
  return alpha > -kQuarterPi && alpha <= kQuarterPi;
}

PhaseSplit normalize_phase(double beta) {
  if (!std::isfinite(beta)) throw ConfigError("phase angle must be finite");
  if (is_normalized_phase(beta)) return {0, beta};
  // alpha = beta - k pi/2 with k the smallest integer keeping alpha <= pi/4.
  double k = std::ceil((beta - kQuarterPi) / kHalfPi);
  double alpha = beta - k * kHalfPi;
  if (alpha > kQuarterPi) {
    k += 1;
    alpha -= kHalfPi;
  } else if (alpha <= -kQuarterPi) {
    k -= 1;
    alpha += kHalfPi;
  }
  // Values a rounding error away from -pi/4 snap onto the closed end.
  if (std::abs(alpha + kQuarterPi) < 1e-15) {
    k -= 1;
    alpha = kQuarterPi;
  }
  int s_power = static_cast<int>(std::fmod(k, 4.0));
  if (s_power < 0) s_power += 4;
  return {s_power, alpha};
}

Gate Gate::cnot(int control, int target) {
  if (control == target)
    throw ConfigError(fmt::format("cnot control equals target ({})", control));
  if (control < 0 || target < 0) throw ConfigError("negative qubit index");
  return {GateKind::kCnot, control, target, 0.0};
}

Gate Gate::h(int qubit) {
  if (qubit < 0) throw ConfigError("negative qubit index");
  return {GateKind::kH, qubit, -1, 0.0};
}

Gate Gate::s(int qubit) {
  if (qubit < 0) throw ConfigError("negative qubit index");
  return {GateKind::kS, qubit, -1, 0.0};
}

Gate Gate::zphase(int qubit, double angle) {
  if (qubit < 0) throw ConfigError("negative qubit index");
  if (!std::isfinite(angle) || !is_normalized_phase(angle))
    throw ConfigError(fmt::format("zphase angle {} outside (-pi/4, pi/4]", angle));
  return {GateKind::kZPhase, qubit, -1, angle};
}

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 0) throw ConfigError("negative qubit count");
}

void Circuit::check_qubit(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits_)
    throw ConfigError(
        fmt::format("qubit {} out of range for width {}", qubit, num_qubits_));
}

Circuit& Circuit::cnot(int control, int target) {
  return push(Gate::cnot(control, target));
}
Circuit& Circuit::h(int qubit) { return push(Gate::h(qubit)); }
Circuit& Circuit::s(int qubit) { return push(Gate::s(qubit)); }

Circuit& Circuit::phase(int qubit, double beta) {
  check_qubit(qubit);
  const auto split = normalize_phase(beta);
  for (int k = 0; k < split.s_power; ++k) gates_.push_back(Gate::s(qubit));
  if (std::abs(split.alpha) > kZeroAngle)
    gates_.push_back(Gate::zphase(qubit, split.alpha));
  return *this;
}

Circuit& Circuit::push(const Gate& gate) {
  check_qubit(gate.q0);
  switch (gate.kind) {
    case GateKind::kCnot:
      check_qubit(gate.q1);
      if (gate.q0 == gate.q1) throw ConfigError("cnot control equals target");
      break;
    case GateKind::kZPhase:
      if (!std::isfinite(gate.angle) || !is_normalized_phase(gate.angle))
        throw ConfigError("zphase angle not normalized");
      [[fallthrough]];
    default:
      if (gate.q1 != -1) throw ConfigError("single-qubit gate with second qubit");
  }
  gates_.push_back(gate);
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.num_qubits_ != num_qubits_)
    throw ConfigError("cannot append circuits of different width");
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
  return *this;
}

std::size_t two_qubit_count(const Circuit& c) {
  const auto g = c.gates();
  return static_cast<std::size_t>(
      std::count_if(g.begin(), g.end(), [](const Gate& x) { return x.is_two_qubit(); }));
}

std::size_t phase_gate_count(const Circuit& c) {
  const auto g = c.gates();
  return static_cast<std::size_t>(std::count_if(
      g.begin(), g.end(), [](const Gate& x) { return x.kind == GateKind::kZPhase; }));
}

Circuit invert(const Circuit& c) {
  Circuit out(c.num_qubits());
  out.reserve(c.size());
  const auto g = c.gates();
  for (auto it = g.rbegin(); it != g.rend(); ++it) {
    switch (it->kind) {
      case GateKind::kCnot:
      case GateKind::kH:
        out.push(*it);
        break;
      case GateKind::kS:
        out.s(it->q0).s(it->q0).s(it->q0);
        break;
      case GateKind::kZPhase:
        out.phase(it->q0, -it->angle);
        break;
    }
  }
  return out;
}

Eigen::MatrixXcd unitary_of(const Circuit& c, int max_qubits) {
  if (c.num_qubits() > max_qubits)
    throw CapExceeded(fmt::format("unitary of {} qubits exceeds cap {}",
                                  c.num_qubits(), max_qubits));
  const Eigen::Index dim = Eigen::Index{1} << c.num_qubits();
  Eigen::MatrixXcd u(dim, dim);
  Eigen::VectorXcd col(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    col.setZero();
    col(j) = 1.0;
    apply_circuit(col, c);
    u.col(j) = col;
  }
  return u;
}

double phase_insensitive_overlap(const Eigen::MatrixXcd& a,
                                 const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ConfigError("overlap of matrices with different shapes");
  return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

int parse_index(std::string_view tok, std::size_t line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || v < 0)
    throw ParseError(line, fmt::format("bad qubit index '{}'", tok));
  return v;
}

double parse_angle(std::string_view tok, std::size_t line) {
  // std::from_chars for double is not available on every toolchain we build on.
  const std::string s(tok);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ParseError(line, fmt::format("bad angle '{}'", tok));
  return v;
}

struct ParsedGate {
  std::size_t line;
  std::string_view op;
  int a;
  int b;
  double angle;
};

}  // namespace

Circuit parse(std::string_view text) {
  int declared = -1;
  int max_index = -1;
  std::vector<ParsedGate> parsed;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto tok = split_ws(line);
    const auto op = tok[0];
    auto expect_args = [&](std::size_t n) {
      if (tok.size() != n + 1)
        throw ParseError(line_no, fmt::format("'{}' expects {} argument(s)", op, n));
    };
    if (op == "qubits") {
      expect_args(1);
      if (declared >= 0 || !parsed.empty())
        throw ParseError(line_no, "'qubits' must be the first statement");
      declared = parse_index(tok[1], line_no);
      if (declared == 0) throw ParseError(line_no, "qubit count must be positive");
      continue;
    }
    ParsedGate g{line_no, op, -1, -1, 0.0};
    if (op == "cnot") {
      expect_args(2);
      g.a = parse_index(tok[1], line_no);
      g.b = parse_index(tok[2], line_no);
      if (g.a == g.b) throw ParseError(line_no, "cnot control equals target");
    } else if (op == "h" || op == "s" || op == "sdg") {
      expect_args(1);
      g.a = parse_index(tok[1], line_no);
    } else if (op == "zphase") {
      expect_args(2);
      g.a = parse_index(tok[1], line_no);
      g.angle = parse_angle(tok[2], line_no);
    } else {
      throw ParseError(line_no, fmt::format("unknown gate '{}'", op));
    }
    max_index = std::max({max_index, g.a, g.b});
    if (declared >= 0 && max_index >= declared)
      throw ParseError(line_no, fmt::format("qubit {} out of range for width {}",
                                            max_index, declared));
    parsed.push_back(g);
  }

  Circuit c(declared >= 0 ? declared : std::max(1, max_index + 1));
  for (const auto& g : parsed) {
    if (g.op == "cnot") {
      c.cnot(g.a, g.b);
    } else if (g.op == "h") {
      c.h(g.a);
    } else if (g.op == "s") {
      c.s(g.a);
    } else if (g.op == "sdg") {
      c.s(g.a).s(g.a).s(g.a);
    } else {
      c.phase(g.a, g.angle);
    }
  }
  return c;
}

std::string serialize(const Circuit& c) {
  std::string out = fmt::format("qubits {}\n", c.num_qubits());
  for (const auto& g : c.gates()) {
    switch (g.kind) {
      case GateKind::kCnot:
        out += fmt::format("cnot {} {}\n", g.q0, g.q1);
        break;
      case GateKind::kH:
        out += fmt::format("h {}\n", g.q0);
        break;
      case GateKind::kS:
        out += fmt::format("s {}\n", g.q0);
        break;
      case GateKind::kZPhase:
        // Shortest representation that parses back to the same double.
        out += fmt::format("zphase {} {}\n", g.q0, g.angle);
        break;
    }
  }
  return out;
}

Circuit read_circuit_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return parse(ss.str());
}

void write_circuit_file(const std::string& path, const Circuit& c) {
  write_file_atomic(path, serialize(c));
}

void write_file_atomic(const std::string& path, std::string_view contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("cannot write " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot rename " + tmp + " to " + path);
  }
}

}  // namespace qmix
