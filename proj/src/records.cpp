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

#include "pulsevqe/records.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "pulsevqe/error.hpp"

namespace pulsevqe {

namespace {

nlohmann::json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

void csv_header(std::ostream& os, const char* columns) {
  os.precision(17);
  os << "# schema_version=" << kRecordSchemaVersion << '\n' << columns << '\n';
}

}  // namespace

nlohmann::json to_json(const OptimizationRecord& rec) {
  nlohmann::json params = nlohmann::json::array();
  for (std::size_t i = 0; i < rec.best_params.size(); ++i) {
    const auto& slot = rec.best_params.layout[i];
    params.push_back({{"transmon", slot.transmon},
                      {"role", role_name(slot.role)},
                      {"index", slot.index},
                      {"value", rec.best_params.values[i]},
                      {"lower", rec.best_params.lower[i]},
                      {"upper", rec.best_params.upper[i]}});
  }
  return {{"schema_version", kRecordSchemaVersion},
          {"best_energy", rec.best_energy},
          {"error_vs_fci", number_or_null(rec.error_vs_fci)},
          {"leakage_final", rec.leakage_final},
          {"overlap_final", number_or_null(rec.overlap_final)},
          {"n_energy_evals", rec.n_energy_evals},
          {"n_grad_evals", rec.n_grad_evals},
          {"iterations", rec.iterations},
          {"converged", rec.converged},
          {"aborted", rec.aborted},
          {"stop_reason", rec.stop_reason},
          {"wall_seconds", rec.wall_seconds},
          {"start_index", rec.start_index},
          {"segments", rec.segments},
          {"total_time", rec.total_time},
          {"best_params", params},
          {"trace", rec.trace},
          {"pulses", to_json(rec.pulses)}};
}

void write_trace_csv(std::ostream& os, const std::vector<double>& trace) {
  csv_header(os, "iteration,energy_hartree");
  for (std::size_t i = 0; i < trace.size(); ++i) os << i << ',' << trace[i] << '\n';
}

void write_trajectory_csv(std::ostream& os, const std::vector<Snapshot>& trajectory,
                          std::optional<double> exact) {
  csv_header(os, "t_ns,energy_hartree,energy_error_vs_fci,leakage");
  for (const auto& s : trajectory) {
    os << s.t << ',' << s.energy << ',';
    if (exact) os << s.energy - *exact;
    os << ',' << s.leakage << '\n';
  }
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  csv_header(os, "r_angstrom,e_hf,e_ctrlvqe,e_fci,error,leakage,overlap,pulse_T");
  for (const auto& r : rows) {
    os << r.r_angstrom << ',' << r.e_hf << ',' << r.e_ctrlvqe << ',' << r.e_fci << ',' << r.error << ','
       << r.leakage << ',' << r.overlap << ',' << r.pulse_t << '\n';
  }
}

void write_noise_csv(std::ostream& os, const std::vector<NoiseRow>& rows) {
  csv_header(os, "sigma,mean_error,stderr,samples");
  for (const auto& r : rows) os << r.sigma << ',' << r.mean_error << ',' << r.std_error << ',' << r.samples << '\n';
}

void write_gradcheck_csv(std::ostream& os, const std::vector<GradcheckRow>& rows) {
  csv_header(os, "index,transmon,role,value,analytic,finite_difference,deviation,analytic_entry");
  for (const auto& r : rows) {
    os << r.index << ',' << r.transmon << ',' << r.role << ',' << r.value << ',' << r.analytic << ','
       << r.numeric << ',' << r.deviation << ',' << (r.analytic_entry ? 1 : 0) << '\n';
  }
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace pulsevqe
