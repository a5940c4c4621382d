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

#include "qmix/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "qmix/circuit.hpp"
#include "qmix/distances.hpp"
#include "qmix/error.hpp"
#include "qmix/generators.hpp"
#include "qmix/protocol.hpp"
#include "qmix/simplify.hpp"
#include "qmix/sweep.hpp"
#include "qmix/verify.hpp"

namespace qmix {

namespace {

using json = nlohmann::json;

void require_epsilon(double eps) {
  if (!std::isfinite(eps) || eps < 0)
    throw ConfigError(fmt::format("epsilon must be finite and >= 0, got {}", eps));
}

void require_p(double p) {
  if (!std::isfinite(p) || p < 0 || p > 1)
    throw ConfigError(fmt::format("p must lie in [0, 1], got {}", p));
}

void require_qubits(int n) {
  if (n < 1 || n > 62) throw ConfigError(fmt::format("--qubits must be in [1, 62], got {}", n));
}

ReplacementPlan make_plan(const Circuit& c, double eps, double p, bool squash) {
  if (squash || p == 1.0) return plan_squash(c, eps);
  return plan_replacements(c, eps, p);
}

void kv(std::ostream& out, std::string_view key, const auto& value) {
  fmt::print(out, "{}={}\n", key, value);
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".manifest.json");
  return p.string();
}

struct GenerateArgs {
  std::string family;
  int qubits = 0;
  std::size_t depth = 500;
  std::uint64_t seed = 0;
  GateProbabilities probs;
  std::string out;
};

struct SimplifyArgs {
  std::string in, out;
  std::string strategy = "best";
};

struct DistanceArgs {
  double alpha = 0.0;
  double p = 0.0;
  std::optional<double> theta;
};

struct OptimizeArgs {
  std::string in;
  double epsilon = 0.0;
  double p = 0.0;
  std::size_t shots = kDefaultShots;
  std::uint64_t seed = 0;
  bool squash = false;
  unsigned workers = 1;
};

struct VerifyArgs {
  std::string in;
  double epsilon = 0.0;
  double p = 0.0;
  bool squash = false;
  std::string mode = "all";
  std::uint64_t seed = 0;
  int restarts = 8;
  std::size_t states = 32;
  std::size_t shots_per_state = 64;
};

struct SweepArgs {
  std::string circuit;
  std::string in;
  int qubits = 0;
  std::size_t depth = 500;
  GateProbabilities probs;
  std::vector<double> epsilons;
  std::vector<double> ps;
  std::size_t shots = kDefaultShots;
  std::size_t realizations = 1;
  std::uint64_t seed = 0;
  int restarts = 0;
  std::size_t frobenius_states = 0;
  std::size_t frobenius_shots = 64;
  unsigned workers = 1;
  std::string out;
};

int do_generate(const GenerateArgs& a, std::ostream& out) {
  require_qubits(a.qubits);
  Circuit c(1);
  if (a.family == "qft") {
    c = qft(a.qubits);
  } else {
    a.probs.validate();
    if (a.probs.p_cnot > 0 && a.qubits < 2)
      throw ConfigError("rqc with CNOTs needs at least 2 qubits");
    c = random_circuit(a.qubits, a.depth, a.probs, a.seed);
  }
  write_circuit_file(a.out, c);
  kv(out, "gates", c.size());
  kv(out, "two_qubit", two_qubit_count(c));
  return exit_code::kOk;
}

int do_simplify(const SimplifyArgs& a, std::ostream& out) {
  const Circuit c = read_circuit_file(a.in);
  Circuit s = a.strategy == "basic"        ? simplify(c, Strategy::basic())
              : a.strategy == "aggressive" ? simplify(c, Strategy::aggressive())
                                           : best_simplify(c);
  write_circuit_file(a.out, s);
  kv(out, "gates_before", c.size());
  kv(out, "gates_after", s.size());
  kv(out, "two_qubit_before", two_qubit_count(c));
  kv(out, "two_qubit_after", two_qubit_count(s));
  return exit_code::kOk;
}

int do_distance(const DistanceArgs& a, std::ostream& out) {
  require_p(a.p);
  const double theta_tilde = optimal_theta(a.alpha, a.p);
  const ReplacementChannelParams r{a.alpha, a.theta.value_or(theta_tilde), a.p};
  r.validate();
  const std::pair<std::string_view, double> rows[] = {
      {"diamond", diamond_distance_single(r)},
      {"diamond_min", min_diamond_distance(a.alpha, a.p)},
      {"frobenius_avg", frobenius_avg_single(r)},
      {"trace_avg", trace_avg_single(r)},
      {"avg_case", avg_case_single(r)},
  };
  fmt::print(out, "# alpha={} p={} theta={} theta_tilde={}\n", a.alpha, a.p, r.theta,
             theta_tilde);
  fmt::print(out, "# {:<14} {:>24}\n", "measure", "value");
  for (const auto& [name, value] : rows) fmt::print(out, "# {:<14} {:>24.17g}\n", name, value);
  kv(out, "alpha", a.alpha);
  kv(out, "p", a.p);
  kv(out, "theta", r.theta);
  kv(out, "theta_tilde", theta_tilde);
  for (const auto& [name, value] : rows) kv(out, name, value);
  return exit_code::kOk;
}

int do_optimize(const OptimizeArgs& a, std::ostream& out) {
  require_epsilon(a.epsilon);
  if (!a.squash) require_p(a.p);
  if (a.shots == 0) throw ConfigError("--shots must be positive");
  const Circuit c = read_circuit_file(a.in);
  const ReplacementPlan plan = make_plan(c, a.epsilon, a.p, a.squash);
  const ShotStatistics stats = estimate_avg_two_qubit(plan, a.shots, a.seed, a.workers);
  const bool squash = plan.mode == ReplacementMode::kSquash;
  kv(out, "mode", squash ? "squash" : "mixture");
  kv(out, "qubits", c.num_qubits());
  kv(out, "gates", c.size());
  kv(out, "epsilon", a.epsilon);
  kv(out, "p", squash ? 1.0 : a.p);
  kv(out, "baseline_2q", plan.baseline_2q);
  kv(out, "squashed_2q", plan.squashed_2q);
  kv(out, "n_accepted", plan.accepted.size());
  kv(out, "spent_budget", plan.spent);
  kv(out, "shots", a.shots);
  kv(out, "seed", a.seed);
  kv(out, "mean_2q", stats.mean);
  kv(out, "stderr_2q", stats.std_error);
  kv(out, "expected_removed_2q", static_cast<double>(plan.baseline_2q) - stats.mean);
  for (const auto& cand : plan.accepted)
    fmt::print(out, "accepted gate={} alpha={} d_min={} theta_tilde={}\n", cand.gate_index,
               cand.alpha, cand.d_min, cand.theta_tilde);
  for (const auto& [count, n] : stats.histogram) fmt::print(out, "histogram {}={}\n", count, n);
  return exit_code::kOk;
}

int do_verify(const VerifyArgs& a, std::ostream& out) {
  require_epsilon(a.epsilon);
  if (!a.squash) require_p(a.p);
  if (a.restarts < 1) throw ConfigError("--restarts must be positive");
  if (a.states == 0 || a.shots_per_state == 0)
    throw ConfigError("--states and --shots-per-state must be positive");
  const Circuit c = read_circuit_file(a.in);
  const int n = c.num_qubits();
  if (a.mode == "bounds" && n > kLowerBoundCap)
    throw CapExceeded(fmt::format("diamond lower bound limited to {} qubits", kLowerBoundCap));
  if (a.mode == "avgcase" && n > kSuperoperatorCap)
    throw CapExceeded(fmt::format("superoperators limited to {} qubits", kSuperoperatorCap));
  const ReplacementPlan plan = make_plan(c, a.epsilon, a.p, a.squash);

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  DistanceReport r{diamond_upper_bound(plan), nan, nan, nan, nan};
  const bool all = a.mode == "all";
  if (a.mode == "bounds" || (all && n <= kLowerBoundCap))
    r.d_lower_est = diamond_lower_bound(plan, a.restarts, a.seed);
  if (a.mode == "frobenius" || all) {
    const auto f = frobenius_mc_full(plan, a.states, a.shots_per_state, a.seed);
    r.frobenius_mc = f.mean;
    r.frobenius_mc_err = f.std_error;
  }
  if (a.mode == "avgcase" || (all && n <= kSuperoperatorCap))
    r.avg_case = avg_case_distance(superoperator_of(plan.base), mixed_channel_superoperator(plan));

  kv(out, "n_accepted", plan.accepted.size());
  kv(out, "epsilon", a.epsilon);
  kv(out, "d_upper", r.d_upper);
  kv(out, "d_lower_est", r.d_lower_est);
  kv(out, "frobenius_mc", r.frobenius_mc);
  kv(out, "frobenius_mc_err", r.frobenius_mc_err);
  kv(out, "avg_case", r.avg_case);
  return exit_code::kOk;
}

int do_sweep(const SweepArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  SweepConfig config;
  config.epsilons = a.epsilons;
  config.ps = a.ps;
  config.n_shots = a.shots;
  config.n_realizations = a.realizations;
  config.seed = a.seed;
  config.lower_bound_restarts = a.restarts;
  config.frobenius_states = a.frobenius_states;
  config.frobenius_shots_per_state = a.frobenius_shots;
  config.workers = a.workers;
  if (!a.in.empty()) {
    if (!a.circuit.empty()) throw ConfigError("give either --circuit or --in, not both");
    const Circuit c = read_circuit_file(a.in);
    config.circuit_name = std::filesystem::path(a.in).stem().string();
    config.source = [c](std::size_t, std::uint64_t) { return c; };
  } else if (a.circuit == "qft") {
    require_qubits(a.qubits);
    config.circuit_name = "qft";
    config.source = [n = a.qubits](std::size_t, std::uint64_t) { return qft(n); };
  } else if (a.circuit == "rqc") {
    require_qubits(a.qubits);
    a.probs.validate();
    if (a.probs.p_cnot > 0 && a.qubits < 2)
      throw ConfigError("rqc with CNOTs needs at least 2 qubits");
    config.circuit_name = "rqc";
    config.randomized = true;
    config.source = [n = a.qubits, depth = a.depth, probs = a.probs](std::size_t,
                                                                     std::uint64_t seed) {
      return random_circuit(n, depth, probs, seed);
    };
  } else {
    throw ConfigError("sweep needs --circuit rqc|qft or --in <file>");
  }

  const std::string started_at = utc_now();
  const auto rows = sweep(config);
  write_file_atomic(a.out, to_csv(rows));

  std::string command = "qmix";
  for (const auto& s : args) command += " " + s;
  json manifest = {
      {"version", kVersion},
      {"command", command},
      {"config",
       {{"circuit", config.circuit_name},
        {"input", a.in},
        {"qubits", a.qubits},
        {"depth", a.depth},
        {"gate_probabilities",
         {{"cnot", a.probs.p_cnot}, {"h", a.probs.p_h}, {"s", a.probs.p_s}, {"z", a.probs.p_zphase}}},
        {"epsilons", a.epsilons},
        {"ps", a.ps},
        {"n_shots", a.shots},
        {"n_realizations", config.randomized ? a.realizations : 1},
        {"lower_bound_restarts", a.restarts},
        {"frobenius_states", a.frobenius_states},
        {"frobenius_shots_per_state", a.frobenius_shots},
        {"workers", a.workers},
        {"caps",
         {{"unitary", kDefaultUnitaryCap},
          {"superoperator", kSuperoperatorCap},
          {"lower_bound", kLowerBoundCap},
          {"density", kDensityCap}}},
        {"output", a.out}}},
      {"master_seed", a.seed},
      {"started_at", started_at},
  };
  write_file_atomic(manifest_path(a.out), manifest.dump(2) + "\n");
  kv(out, "rows", rows.size());
  kv(out, "csv", a.out);
  kv(out, "manifest", manifest_path(a.out));
  return exit_code::kOk;
}

void add_gate_probability_options(CLI::App* cmd, GateProbabilities& probs) {
  cmd->add_option("--p-cnot", probs.p_cnot, "CNOT probability")->capture_default_str();
  cmd->add_option("--p-h", probs.p_h, "Hadamard probability")->capture_default_str();
  cmd->add_option("--p-s", probs.p_s, "S probability")->capture_default_str();
  cmd->add_option("--p-z", probs.p_zphase, "Z phase probability")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic phase-gate replacement for CNOT-count reduction", "qmix"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a random circuit or a QFT circuit");
  generate->add_option("family", gen.family, "rqc or qft")
      ->required()
      ->check(CLI::IsMember({"rqc", "qft"}));
  generate->add_option("--qubits", gen.qubits, "Number of qubits")->required();
  generate->add_option("--depth", gen.depth, "Gate count for rqc")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  add_gate_probability_options(generate, gen.probs);
  generate->add_option("--out", gen.out, "Output circuit file")->required();

  SimplifyArgs simp;
  auto* simplify_cmd = app.add_subcommand("simplify", "Simplify a circuit file");
  simplify_cmd->add_option("--in", simp.in, "Input circuit file")->required();
  simplify_cmd->add_option("--out", simp.out, "Output circuit file")->required();
  simplify_cmd->add_option("--strategy", simp.strategy, "basic, aggressive or best")
      ->check(CLI::IsMember({"basic", "aggressive", "best"}))
      ->capture_default_str();

  DistanceArgs dist;
  auto* distance = app.add_subcommand("distance", "Single-gate replacement distances");
  distance->add_option("--alpha", dist.alpha, "Replaced phase angle")->required();
  distance->add_option("--p", dist.p, "Identity probability")->required();
  distance->add_option("--theta", dist.theta, "Substitute angle (default: optimal)");

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "Plan replacements and estimate CNOT counts");
  optimize->add_option("--in", opt.in, "Input circuit file")->required();
  optimize->add_option("--epsilon", opt.epsilon, "Diamond-distance budget")->required();
  optimize->add_option("--p", opt.p, "Identity probability");
  optimize->add_option("--shots", opt.shots, "Number of sampled instances")->capture_default_str();
  optimize->add_option("--seed", opt.seed, "Sampling seed")->capture_default_str();
  optimize->add_flag("--squash", opt.squash, "Deterministic phase squashing (p = 1)");
  optimize->add_option("--workers", opt.workers, "Worker threads (0 = all cores)")
      ->capture_default_str();

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Channel-level distances of a replacement plan");
  verify->add_option("--in", ver.in, "Input circuit file")->required();
  verify->add_option("--epsilon", ver.epsilon, "Diamond-distance budget")->required();
  verify->add_option("--p", ver.p, "Identity probability");
  verify->add_flag("--squash", ver.squash, "Deterministic phase squashing (p = 1)");
  verify->add_option("--mode", ver.mode, "bounds, frobenius, avgcase or all")
      ->check(CLI::IsMember({"bounds", "frobenius", "avgcase", "all"}))
      ->capture_default_str();
  verify->add_option("--seed", ver.seed, "Estimator seed")->capture_default_str();
  verify->add_option("--restarts", ver.restarts, "Lower-bound ascent restarts")
      ->capture_default_str();
  verify->add_option("--states", ver.states, "Haar states for the Frobenius estimate")
      ->capture_default_str();
  verify->add_option("--shots-per-state", ver.shots_per_state,
                     "Instances per state when the density path is unavailable")
      ->capture_default_str();

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid sweep over epsilon and p, written as CSV");
  sweep_cmd->add_option("--circuit", sw.circuit, "rqc or qft")
      ->check(CLI::IsMember({"rqc", "qft"}));
  sweep_cmd->add_option("--in", sw.in, "Input circuit file instead of a generated family");
  sweep_cmd->add_option("--qubits", sw.qubits, "Number of qubits");
  sweep_cmd->add_option("--depth", sw.depth, "Gate count for rqc")->capture_default_str();
  add_gate_probability_options(sweep_cmd, sw.probs);
  sweep_cmd->add_option("--epsilons", sw.epsilons, "Budgets, comma separated")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--ps", sw.ps, "Identity probabilities, comma separated (1 = squash)")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--shots", sw.shots, "Instances per grid cell")->capture_default_str();
  sweep_cmd->add_option("--realizations", sw.realizations, "Random circuit realizations")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sw.seed, "Master seed")->capture_default_str();
  sweep_cmd->add_option("--restarts", sw.restarts, "Lower-bound restarts (0 = skip)")
      ->capture_default_str();
  sweep_cmd->add_option("--frobenius-states", sw.frobenius_states,
                        "Haar states for the Frobenius column (0 = skip)")
      ->capture_default_str();
  sweep_cmd->add_option("--frobenius-shots", sw.frobenius_shots,
                        "Instances per state beyond the density cap")
      ->capture_default_str();
  sweep_cmd->add_option("--workers", sw.workers, "Worker threads (0 = all cores)")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sw.out, "Output CSV path")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_code::kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return exit_code::kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kConfig;
  }

  try {
    if (*generate) return do_generate(gen, out);
    if (*simplify_cmd) return do_simplify(simp, out);
    if (*distance) return do_distance(dist, out);
    if (*optimize) {
      if (!opt.squash && optimize->count("--p") == 0)
        throw ConfigError("optimize needs --p or --squash");
      return do_optimize(opt, out);
    }
    if (*verify) {
      if (!ver.squash && verify->count("--p") == 0)
        throw ConfigError("verify needs --p or --squash");
      return do_verify(ver, out);
    }
    if (*sweep_cmd) return do_sweep(sw, args, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kConfig;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kConfig;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kCap;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kIo;
  }
  return exit_code::kConfig;
}

}  // namespace qmix
