// Copyright 2026 The pulsevqe Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pulsevqe/commands.hpp"
#include "pulsevqe/records.hpp"
#include "support.hpp"

using namespace pulsevqe;
using pulsevqe::testing_support::data_path;
using pulsevqe::testing_support::fixture;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("pulsevqe_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Cli, ExactOnLiH) {
  const auto r = cli({"exact", "--hamiltonian", fixture("lih_sto3g_4q_r1.50.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("fci_energy -7.881015715"), std::string::npos);
  EXPECT_NE(r.out.find("hf_energy -7.863357621"), std::string::npos);
}

TEST(Cli, ExactIdentityOnly) {
  const auto dir = scratch_dir("identity");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "h.json") << R"({"n_qubits": 1, "constant": 0.7, "terms": [], "reference_state": "0"})";
  const auto r = cli({"exact", "--hamiltonian", (dir / "h.json").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("fci_energy 0.7\n"), std::string::npos);
  EXPECT_NE(r.out.find("hf_energy 0.7\n"), std::string::npos);
}

TEST(Cli, MissingFileExitCode) {
  const auto r = cli({"exact", "--hamiltonian", "/nonexistent/h.json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/nonexistent/h.json"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"bogus"}).code, 2);
  EXPECT_EQ(cli({"exact"}).code, 2);
  EXPECT_EQ(cli({"exact", "--help"}).code, 0);
  EXPECT_EQ(cli({"evolve", "--hamiltonian", fixture("h2_sto3g_parity_r0.75.json"), "--normalized",
                 "--unnormalized"})
                .code,
            2);
}

TEST(Cli, EvolveZeroPulseStaysAtHartreeFock) {
  const auto dir = scratch_dir("evolve0");
  const auto r = cli({"evolve", "--hamiltonian", fixture("h2_sto3g_parity_r0.75.json"), "--time", "2", "--snapshots",
                      "20", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir / "trajectory.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# schema_version=1");
  std::getline(in, line);
  EXPECT_EQ(line, "t_ns,energy_hartree,energy_error_vs_fci,leakage");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream ss(line);
    std::string t, e, err, leak;
    std::getline(ss, t, ',');
    std::getline(ss, e, ',');
    std::getline(ss, err, ',');
    std::getline(ss, leak, ',');
    EXPECT_NEAR(std::stod(e), -1.1161514489386022, 1e-12);
    EXPECT_EQ(std::stod(leak), 0.0);
  }
  EXPECT_EQ(rows, 11);
}

TEST(Cli, EvolveGoldenPulse) {
  const auto r = cli({"evolve", "--hamiltonian", fixture("h2_sto3g_parity_r0.75.json"), "--pulse",
                      data_path("pulses/h2_r0.75_T9_2seg.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::stringstream ss(r.out);
  std::string key;
  double value = 1.0;
  while (ss >> key) {
    if (key == "error_vs_fci") {
      ss >> value;
      break;
    }
  }
  EXPECT_LT(value, 1e-4);
}

TEST(Cli, OptimizeIsReproducible) {
  const auto a = scratch_dir("opt_a");
  const auto b = scratch_dir("opt_b");
  for (const auto& dir : {a, b}) {
    const auto r = cli({"optimize", "--hamiltonian", fixture("h2_sto3g_parity_r0.75.json"), "--segments", "1",
                        "--time", "6", "--starts", "2", "--seed", "5", "--max-iters", "15", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* f : {"record.json", "record_pulse.json", "record_trace.csv"}) {
    EXPECT_FALSE(slurp(a / f).empty());
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const auto rec = nlohmann::json::parse(slurp(a / "record.json"));
  EXPECT_EQ(rec["schema_version"], 1);
  for (const char* k : {"best_params", "best_energy", "error_vs_fci", "leakage_final", "overlap_final",
                        "n_energy_evals", "n_grad_evals", "converged", "trace"}) {
    EXPECT_TRUE(rec.contains(k)) << k;
  }
}

TEST(Cli, GradcheckPassesAndFails) {
  const auto ok = cli({"gradcheck", "--hamiltonian", fixture("h2_sto3g_parity_r0.75.json"), "--segments", "2",
                       "--time", "9", "--random", "2", "--seed", "3"});
  EXPECT_EQ(ok.code, 0) << ok.out;
  const auto bad = cli({"gradcheck", "--hamiltonian", fixture("h2_sto3g_parity_r0.75.json"), "--segments", "2",
                        "--time", "9", "--random", "2", "--seed", "3", "--h", "0.01"});
  EXPECT_EQ(bad.code, 1);
}

TEST(Cli, GradcheckZeroPulseFrequencyEntries) {
  const auto dir = scratch_dir("gc0");
  const auto r = cli({"gradcheck", "--hamiltonian", fixture("h2_sto3g_parity_r0.75.json"), "--segments", "2",
                      "--time", "9", "--out", dir.string()});
  ASSERT_EQ(r.code, 0);
  std::ifstream in(dir / "gradcheck.csv");
  std::string line;
  int freq_rows = 0;
  while (std::getline(in, line)) {
    if (line.find(",freq,") == std::string::npos) continue;
    ++freq_rows;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    EXPECT_EQ(std::stod(cols[4]), 0.0);
  }
  EXPECT_EQ(freq_rows, 2);
}

TEST(Cli, NoiseNeedsPulse) {
  EXPECT_EQ(cli({"noise", "--hamiltonian", fixture("h2_sto3g_parity_r0.75.json")}).code, 2);
}

TEST(Cli, NoiseZeroSigma) {
  const auto dir = scratch_dir("noise0");
  const auto r = cli({"noise", "--hamiltonian", fixture("h2_sto3g_parity_r0.75.json"), "--pulse",
                      data_path("pulses/h2_r0.75_T9_2seg.json"), "--sigmas", "0", "--samples", "3", "--out",
                      dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir / "noise.csv");
  EXPECT_NE(csv.find("sigma,mean_error,stderr,samples"), std::string::npos);
}

TEST(Cli, ScanWritesSchemaColumns) {
  const auto dir = scratch_dir("scan");
  const auto r = cli({"scan", "--hamiltonian", fixture("heh+_sto3g_parity_r3.00.json"), "--durations", "0.5", "1",
                      "--starts", "1", "--max-iters", "10", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir / "scan.csv");
  EXPECT_NE(csv.find("r_angstrom,e_hf,e_ctrlvqe,e_fci,error,leakage,overlap,pulse_T\n3,"), std::string::npos);
}
