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

#include "qmix/sweep.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>

#include <fmt/format.h>

#include "qmix/error.hpp"
#include "qmix/protocol.hpp"
#include "qmix/rng.hpp"

namespace qmix {

namespace {

void validate(const SweepConfig& config) {
  if (!config.source) throw ConfigError("sweep: no circuit source");
  if (config.circuit_name.find_first_of(",\n\r\"") != std::string::npos)
    throw ConfigError("sweep: circuit name must not contain ',', quotes or newlines");
  if (config.epsilons.empty() || config.ps.empty())
    throw ConfigError("sweep: epsilon and p grids must be nonempty");
  for (double e : config.epsilons)
    if (!std::isfinite(e) || e < 0) throw ConfigError(fmt::format("sweep: bad epsilon {}", e));
  for (double p : config.ps)
    if (!std::isfinite(p) || p < 0 || p > 1) throw ConfigError(fmt::format("sweep: bad p {}", p));
  if (config.n_shots == 0) throw ConfigError("sweep: n_shots must be positive");
  if (config.n_realizations == 0) throw ConfigError("sweep: n_realizations must be positive");
  if (config.lower_bound_restarts < 0) throw ConfigError("sweep: negative restart count");
}

}  // namespace

std::vector<SweepRecord> sweep(const SweepConfig& config) {
  validate(config);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const std::size_t n_real = config.randomized ? config.n_realizations : 1;

  std::vector<Circuit> circuits;
  std::vector<std::uint64_t> circuit_seeds;
  for (std::size_t r = 0; r < n_real; ++r) {
    circuit_seeds.push_back(derive_seed(config.seed, streams::kRealization, r));
    circuits.push_back(config.source(r, circuit_seeds.back()));
  }

  std::vector<SweepRecord> rows;
  rows.reserve(config.epsilons.size() * config.ps.size() * n_real);
  for (std::size_t ie = 0; ie < config.epsilons.size(); ++ie) {
    for (std::size_t ip = 0; ip < config.ps.size(); ++ip) {
      const double eps = config.epsilons[ie];
      const double p = config.ps[ip];
      const std::uint64_t cell = ie * config.ps.size() + ip;
      for (std::size_t r = 0; r < n_real; ++r) {
        const Circuit& c = circuits[r];
        const std::uint64_t seed = derive_seed(circuit_seeds[r], streams::kGridCell, cell);
        const ReplacementPlan plan = p == 1.0 ? plan_squash(c, eps) : plan_replacements(c, eps, p);
        const ShotStatistics stats =
            estimate_avg_two_qubit(plan, config.n_shots, seed, config.workers);

        SweepRecord rec;
        rec.circuit = config.circuit_name;
        rec.num_qubits = c.num_qubits();
        rec.epsilon = eps;
        rec.p = p;
        rec.realization = r;
        rec.baseline_2q = plan.baseline_2q;
        rec.mean_2q = stats.mean;
        rec.stderr_2q = stats.std_error;
        rec.n_accepted = plan.accepted.size();
        rec.spent_budget = plan.spent;
        rec.d_upper = diamond_upper_bound(plan);
        rec.d_lower_est = nan;
        rec.frobenius_mc = nan;
        rec.frobenius_mc_err = nan;
        if (config.lower_bound_restarts > 0 && c.num_qubits() <= kLowerBoundCap)
          rec.d_lower_est = diamond_lower_bound(plan, config.lower_bound_restarts, seed);
        if (config.frobenius_states > 0) {
          const auto f = frobenius_mc_full(plan, config.frobenius_states,
                                           config.frobenius_shots_per_state, seed);
          rec.frobenius_mc = f.mean;
          rec.frobenius_mc_err = f.std_error;
        }
        rec.seed = seed;
        rows.push_back(std::move(rec));
      }
    }
  }
  return rows;
}

std::string_view sweep_csv_header() {
  return "circuit,L,epsilon,p,realization,baseline_2q,mean_2q,stderr_2q,"
         "n_accepted,spent_budget,d_upper,d_lower_est,frobenius_mc,"
         "frobenius_mc_err,seed";
}

std::string sweep_csv_row(const SweepRecord& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", r.circuit,
                     r.num_qubits, r.epsilon, r.p, r.realization, r.baseline_2q,
                     r.mean_2q, r.stderr_2q, r.n_accepted, r.spent_budget,
                     r.d_upper, r.d_lower_est, r.frobenius_mc,
                     r.frobenius_mc_err, r.seed);
}

std::string to_csv(const std::vector<SweepRecord>& rows) {
  std::string out(sweep_csv_header());
  out += '\n';
  for (const auto& r : rows) {
    out += sweep_csv_row(r);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
T parse_unsigned(std::string_view s, std::size_t line) {
  const std::string str(s);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(str.c_str(), &end, 10);
  if (str.empty() || str[0] == '-' || *end != '\0' || errno == ERANGE)
    throw ParseError(line, fmt::format("expected an unsigned integer, got '{}'", s));
  return static_cast<T>(v);
}

double parse_double(std::string_view s, std::size_t line) {
  const std::string str(s);
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (str.empty() || *end != '\0')
    throw ParseError(line, fmt::format("expected a number, got '{}'", s));
  return v;
}

}  // namespace

std::vector<SweepRecord> parse_sweep_csv(std::string_view text) {
  std::vector<SweepRecord> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != sweep_csv_header()) throw ParseError(line_no, "unexpected CSV header");
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 15)
      throw ParseError(line_no, fmt::format("expected 15 fields, got {}", f.size()));
    SweepRecord r;
    r.circuit = std::string(f[0]);
    r.num_qubits = parse_unsigned<int>(f[1], line_no);
    r.epsilon = parse_double(f[2], line_no);
    r.p = parse_double(f[3], line_no);
    r.realization = parse_unsigned<std::size_t>(f[4], line_no);
    r.baseline_2q = parse_unsigned<std::size_t>(f[5], line_no);
    r.mean_2q = parse_double(f[6], line_no);
    r.stderr_2q = parse_double(f[7], line_no);
    r.n_accepted = parse_unsigned<std::size_t>(f[8], line_no);
    r.spent_budget = parse_double(f[9], line_no);
    r.d_upper = parse_double(f[10], line_no);
    r.d_lower_est = parse_double(f[11], line_no);
    r.frobenius_mc = parse_double(f[12], line_no);
    r.frobenius_mc_err = parse_double(f[13], line_no);
    r.seed = parse_unsigned<std::uint64_t>(f[14], line_no);
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(line_no, "empty CSV");
  return rows;
}

}  // namespace qmix
