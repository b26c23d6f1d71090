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

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pulsevqe/objective.hpp"
#include "pulsevqe/pulse.hpp"

namespace pulsevqe {

struct OptimizerConfig {
  int max_iters = 1000;
  double grad_tol = 1e-9;
  double energy_tol = 1e-10;  // relative decrease, Hartree
  int history_size = 10;
  std::uint64_t seed = 0;
  int threads = 0;            // 0 = hardware concurrency

  void validate() const;
};

struct OptimizationRecord {
  ParamVector best_params;
  PulseSet pulses;
  double best_energy = 0.0;
  double error_vs_fci = std::numeric_limits<double>::quiet_NaN();
  double leakage_final = 0.0;
  double overlap_final = std::numeric_limits<double>::quiet_NaN();
  int n_energy_evals = 0;
  int n_grad_evals = 0;
  int iterations = 0;
  bool converged = false;
  bool aborted = false;
  std::string stop_reason;
  std::vector<double> trace;
  double wall_seconds = 0.0;
  int start_index = 0;
  std::size_t segments = 0;
  double total_time = 0.0;
};

/// Bound-constrained quasi-Newton minimization from x0 (which must lie in
/// its bounds). Optimization runs in box-normalized coordinates. An error
/// thrown by the objective ends the run with `aborted` set and the best
/// point seen so far.
OptimizationRecord minimize(const Objective& objective, const ParamVector& x0, const OptimizerConfig& cfg);

/// Uniform random point in the box, switch times sorted.
ParamVector random_start(const Objective& objective, std::mt19937_64& rng);

/// Deterministic per-branch seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t branch);

struct MultistartResult {
  OptimizationRecord best;
  std::vector<OptimizationRecord> runs;  // indexed by start
};

/// Start 0 is the objective's template; starts 1..n-1 are uniform in the box
/// with seeds derived from cfg.seed. The lowest energy wins, ties by start index.
MultistartResult multistart(const Objective& objective, int n_starts, const OptimizerConfig& cfg);

struct AdaptiveOptions {
  int max_segments = 5;
  double target_error = 1.6e-3;  // Hartree
  int initial_starts = 1;        // multistart width for the single-segment stage
  double stagnation = 1e-6;      // Hartree, used when no exact energy is available
};

/// Grows square pulses one segment at a time: optimize n = 1, split at a random
/// time, re-optimize from the split pulse, then keep splitting the longest
/// segment. Switch times stay fixed. Returns one record per segment count.
std::vector<OptimizationRecord> adaptive_optimize(const ObjectiveSpec& spec, const AdaptiveOptions& options,
                                                  const OptimizerConfig& cfg);

struct DurationSearchResult {
  std::map<double, OptimizationRecord> records;
  std::optional<double> minimal_time;
};

/// Runs multistart at each duration (ascending); switch times of the template
/// are rescaled to each T. The minimal feasible duration is the first with
/// error <= target_error.
DurationSearchResult duration_search(const ObjectiveSpec& spec, const std::vector<double>& durations,
                                     double target_error, int n_starts, const OptimizerConfig& cfg);

/// Copy of `set` with duration T and switch times scaled by T / set.total_time.
PulseSet rescale_duration(const PulseSet& set, double total_time);

}  // namespace pulsevqe
