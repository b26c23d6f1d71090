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

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pulsevqe/dynamics.hpp"
#include "pulsevqe/noise.hpp"
#include "pulsevqe/optimize.hpp"

namespace pulsevqe {

inline constexpr int kRecordSchemaVersion = 1;

nlohmann::json to_json(const OptimizationRecord& rec);

/// iteration,energy_hartree
void write_trace_csv(std::ostream& os, const std::vector<double>& trace);

/// t_ns,energy_hartree,energy_error_vs_fci,leakage
void write_trajectory_csv(std::ostream& os, const std::vector<Snapshot>& trajectory,
                          std::optional<double> exact);

struct ScanRow {
  double r_angstrom = 0.0;
  double e_hf = 0.0;
  double e_ctrlvqe = 0.0;
  double e_fci = 0.0;
  double error = 0.0;
  double leakage = 0.0;
  double overlap = 0.0;
  double pulse_t = 0.0;
};

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);
void write_noise_csv(std::ostream& os, const std::vector<NoiseRow>& rows);

struct GradcheckRow {
  std::size_t index = 0;
  int transmon = 0;
  std::string role;
  double value = 0.0;
  double analytic = 0.0;
  double numeric = 0.0;
  double deviation = 0.0;  // relative, or absolute near zero
  bool analytic_entry = false;
};

void write_gradcheck_csv(std::ostream& os, const std::vector<GradcheckRow>& rows);

/// Writes text to path, creating parent directories. Throws Error on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace pulsevqe
