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

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "oracles.hpp"
#include "qmix/circuit.hpp"
#include "qmix/cli.hpp"
#include "qmix/error.hpp"
#include "qmix/sweep.hpp"

using namespace qmix;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq != std::string::npos && line.find(' ') > eq) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / fs::path("qmix_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("usage errors exit with the config code") {
  CHECK(run({}).code == exit_code::kConfig);
  CHECK(run({"frobnicate"}).code == exit_code::kConfig);
  CHECK(run({"distance", "--alpha", "0.1"}).code == exit_code::kConfig);
  CHECK(run({"distance", "--alpha", "x", "--p", "0.5"}).code == exit_code::kConfig);
  const auto help = run({"--help"});
  CHECK(help.code == exit_code::kOk);
  CHECK(help.out.find("optimize") != std::string::npos);
  CHECK(run({"--version"}).out == std::string(kVersion) + "\n");
}

TEST_CASE("generate writes qft and reproducible random circuits") {
  TempDir dir;
  CHECK(run({"generate", "qft", "--qubits", "8", "--out", dir / "q.txt"}).code == 0);
  CHECK(two_qubit_count(read_circuit_file(dir / "q.txt")) == 56);
  for (auto name : {"a.txt", "b.txt"})
    CHECK(run({"generate", "rqc", "--qubits", "4", "--depth", "100", "--seed", "9", "--out", dir / name}).code == 0);
  CHECK(run({"generate", "rqc", "--qubits", "4", "--depth", "100", "--seed", "10", "--out", dir / "c.txt"}).code == 0);
  CHECK(slurp(dir / "a.txt") == slurp(dir / "b.txt"));
  CHECK(slurp(dir / "a.txt") != slurp(dir / "c.txt"));
  CHECK(read_circuit_file(dir / "a.txt").size() == 100);
  CHECK(run({"generate", "qft", "--qubits", "0", "--out", dir / "z.txt"}).code == exit_code::kConfig);
  CHECK(run({"generate", "rqc", "--qubits", "3", "--p-cnot", "0.9", "--out", dir / "z.txt"}).code ==
        exit_code::kConfig);
  CHECK(run({"generate", "ghz", "--qubits", "3", "--out", dir / "z.txt"}).code == exit_code::kConfig);
  CHECK_FALSE(fs::exists(dir / "z.txt"));
}

TEST_CASE("simplify preserves the unitary") {
  TempDir dir;
  REQUIRE(run({"generate", "rqc", "--qubits", "3", "--depth", "80", "--seed", "2", "--out", dir / "in.txt"}).code == 0);
  for (auto strategy : {"basic", "aggressive", "best"}) {
    const auto r = run({"simplify", "--in", dir / "in.txt", "--out", dir / "out.txt", "--strategy", strategy});
    REQUIRE(r.code == 0);
    const auto a = read_circuit_file(dir / "in.txt");
    const auto b = read_circuit_file(dir / "out.txt");
    CHECK(oracle::overlap(oracle::kron_unitary(a), oracle::kron_unitary(b)) ==
          doctest::Approx(1.0).epsilon(1e-9));
    const auto kv = key_values(r.out);
    CHECK(std::stoul(kv.at("two_qubit_after")) <= std::stoul(kv.at("two_qubit_before")));
  }
  CHECK(run({"simplify", "--in", dir / "in.txt", "--out", dir / "o.txt", "--strategy", "zx"}).code ==
        exit_code::kConfig);
}

TEST_CASE("distance prints all measures") {
  const auto r = run({"distance", "--alpha", "0.3", "--p", "0.75"});
  REQUIRE(r.code == 0);
  const auto kv = key_values(r.out);
  for (auto key : {"diamond", "diamond_min", "frobenius_avg", "trace_avg", "avg_case", "theta", "theta_tilde"})
    CHECK(kv.count(key) == 1);
  CHECK(std::stod(kv.at("diamond")) == doctest::Approx(std::stod(kv.at("diamond_min"))).epsilon(1e-12));
  CHECK(std::stod(kv.at("avg_case")) ==
        doctest::Approx(std::stod(kv.at("diamond")) / (2 * std::sqrt(2.0))).epsilon(1e-9));
  CHECK(r.out.find("# measure") != std::string::npos);

  const auto t = run({"distance", "--alpha", "0.3", "--p", "0.75", "--theta", "0.5"});
  CHECK(std::stod(key_values(t.out).at("diamond")) ==
        doctest::Approx(oracle::abs_b(0.3, 0.5, 0.75)).epsilon(1e-12));
  CHECK(run({"distance", "--alpha", "0.3", "--p", "1.5"}).code == exit_code::kConfig);
}

TEST_CASE("optimize reports plans and validates input") {
  TempDir dir;
  REQUIRE(run({"generate", "qft", "--qubits", "8", "--out", dir / "q.txt"}).code == 0);
  const auto r = run({"optimize", "--in", dir / "q.txt", "--epsilon", "0.1", "--p", "0.75", "--shots", "500"});
  REQUIRE(r.code == 0);
  const auto kv = key_values(r.out);
  CHECK(kv.at("mode") == "mixture");
  CHECK(kv.at("baseline_2q") == "56");
  CHECK(std::stod(kv.at("spent_budget")) <= 0.1);
  CHECK(std::stod(kv.at("mean_2q")) < 56.0);

  const auto sq = run({"optimize", "--in", dir / "q.txt", "--epsilon", "0.01", "--squash"});
  REQUIRE(sq.code == 0);
  const auto skv = key_values(sq.out);
  CHECK(skv.at("mode") == "squash");
  CHECK(skv.at("stderr_2q") == "0");

  CHECK(run({"optimize", "--in", dir / "q.txt", "--epsilon", "0.1", "--p", "1.5"}).code == exit_code::kConfig);
  CHECK(run({"optimize", "--in", dir / "q.txt", "--epsilon", "-1", "--p", "0.5"}).code == exit_code::kConfig);
  CHECK(run({"optimize", "--in", dir / "q.txt", "--epsilon", "0.1"}).code == exit_code::kConfig);
  CHECK(run({"optimize", "--in", dir / "missing.txt", "--epsilon", "0.1", "--p", "0.5"}).code == exit_code::kIo);
  std::ofstream(dir / "bad.txt") << "qubits 2\ncnot 0 0\n";
  const auto bad = run({"optimize", "--in", dir / "bad.txt", "--epsilon", "0.1", "--p", "0.5"});
  CHECK(bad.code == exit_code::kConfig);
  CHECK(bad.err.find("line 2") != std::string::npos);
}

TEST_CASE("verify prints a distance report and enforces caps") {
  TempDir dir;
  REQUIRE(run({"generate", "qft", "--qubits", "3", "--out", dir / "q3.txt"}).code == 0);
  REQUIRE(run({"generate", "qft", "--qubits", "5", "--out", dir / "q5.txt"}).code == 0);
  const auto r = run({"verify", "--in", dir / "q3.txt", "--epsilon", "0.2", "--p", "0.6", "--restarts", "2", "--states", "4"});
  REQUIRE(r.code == 0);
  const auto kv = key_values(r.out);
  for (auto key : {"d_upper", "d_lower_est", "frobenius_mc", "frobenius_mc_err", "avg_case"}) CHECK(kv.count(key) == 1);
  CHECK(std::stod(kv.at("d_lower_est")) <= std::stod(kv.at("d_upper")) + 1e-9);
  CHECK(std::stod(kv.at("d_upper")) <= 0.2);
  CHECK(run({"verify", "--in", dir / "q5.txt", "--epsilon", "0.1", "--p", "0.5", "--mode", "bounds"}).code ==
        exit_code::kCap);
  const auto f = run({"verify", "--in", dir / "q5.txt", "--epsilon", "0.1", "--p", "0.5", "--mode", "frobenius", "--states", "2"});
  CHECK(f.code == 0);
  CHECK(key_values(f.out).at("d_lower_est") == "nan");
}

TEST_CASE("sweep writes a reproducible CSV with a manifest") {
  TempDir dir;
  const std::vector<std::string> args = {"sweep", "--circuit", "qft", "--qubits", "5", "--epsilons", "0.05,0.1",
                                         "--ps", "0,0.5,0.75,1", "--shots", "64", "--realizations", "3",
                                         "--seed", "7", "--out", dir / "s.csv"};
  REQUIRE(run(args).code == 0);
  const std::string csv = slurp(dir / "s.csv");
  CHECK(csv.substr(0, csv.find('\n')) == sweep_csv_header());
  const auto rows = parse_sweep_csv(csv);
  CHECK(rows.size() == 8);  // deterministic family: one realization per cell
  for (const auto& row : rows) {
    CHECK(row.spent_budget <= row.epsilon);
    CHECK(row.circuit == "qft");
    CHECK(row.baseline_2q == 20);
    if (row.p == 0.0) CHECK(row.mean_2q == 20.0);
  }
  CHECK(to_csv(rows) == csv);

  const auto manifest = nlohmann::json::parse(slurp(dir / "s.manifest.json"));
  for (auto key : {"version", "command", "config", "master_seed", "started_at"}) CHECK(manifest.contains(key));
  CHECK(manifest["master_seed"] == 7);
  CHECK(manifest["version"] == kVersion);
  CHECK(manifest["config"]["ps"].size() == 4);

  auto again = args;
  again.back() = dir / "s2.csv";
  REQUIRE(run(again).code == 0);
  CHECK(slurp(dir / "s2.csv") == csv);
}

TEST_CASE("random sweeps emit one row per realization") {
  TempDir dir;
  const auto r = run({"sweep", "--circuit", "rqc", "--qubits", "3", "--depth", "60", "--epsilons", "0.1",
                      "--ps", "0.5,0.8", "--shots", "16", "--realizations", "3", "--restarts", "2",
                      "--frobenius-states", "2", "--out", dir / "r.csv"});
  REQUIRE(r.code == 0);
  const auto rows = parse_sweep_csv(slurp(dir / "r.csv"));
  REQUIRE(rows.size() == 6);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].realization == k % 3);
    CHECK(rows[k].d_lower_est <= rows[k].d_upper + 1e-9);
    CHECK(std::isfinite(rows[k].frobenius_mc));
  }
  CHECK(rows[0].baseline_2q == rows[3].baseline_2q);
}

TEST_CASE("sweep argument validation") {
  TempDir dir;
  const std::string out = dir / "x.csv";
  CHECK(run({"sweep", "--circuit", "qft", "--qubits", "3", "--epsilons", "0.1", "--ps", "1.5", "--out", out}).code ==
        exit_code::kConfig);
  CHECK(run({"sweep", "--circuit", "qft", "--qubits", "3", "--epsilons", "-0.1", "--ps", "0.5", "--out", out}).code ==
        exit_code::kConfig);
  CHECK(run({"sweep", "--qubits", "3", "--epsilons", "0.1", "--ps", "0.5", "--out", out}).code == exit_code::kConfig);
  CHECK_FALSE(fs::exists(out));
  CHECK(run({"sweep", "--circuit", "qft", "--qubits", "3", "--epsilons", "0.1", "--ps", "0.5", "--shots", "4",
             "--out", dir / "no/such/dir/x.csv"})
            .code == exit_code::kIo);
}

TEST_CASE("CSV parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_sweep_csv(""), ParseError);
  CHECK_THROWS_AS(parse_sweep_csv("a,b,c\n"), ParseError);
  const std::string header(sweep_csv_header());
  CHECK(parse_sweep_csv(header + "\n").empty());
  CHECK_THROWS_AS(parse_sweep_csv(header + "\nqft,3,0.1\n"), ParseError);
  CHECK_THROWS_AS(parse_sweep_csv(header + "\nqft,x,0.1,0.5,0,1,1,0,0,0,0,nan,nan,nan,1\n"), ParseError);
  const auto rows = parse_sweep_csv(header + "\nqft,3,0.1,0.5,0,6,5.5,0.1,2,0.05,0.05,nan,nan,nan,12\n");
  REQUIRE(rows.size() == 1);
  CHECK(std::isnan(rows[0].d_lower_est));
  CHECK(rows[0].seed == 12);
}
