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

#include "pulsevqe/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "parallel.hpp"
#include "pulsevqe/error.hpp"
#include "pulsevqe/lbfgsb.hpp"

namespace pulsevqe {

namespace {

using Clock = std::chrono::steady_clock;

std::size_t segment_count(const PulseSet& set) {
  if (set.kind != PulseKind::square || set.square.empty()) return 0;
  return set.square.front().segments();
}

void fill_diagnostics(const Objective& objective, OptimizationRecord& rec) {
  rec.pulses = objective.pulses(rec.best_params);
  rec.segments = segment_count(rec.pulses);
  rec.total_time = rec.pulses.total_time;
  const StateReport report = objective.report(rec.best_params);
  rec.leakage_final = report.leakage;
  rec.overlap_final = report.overlap;
  if (const auto exact = objective.exact_energy()) rec.error_vs_fci = rec.best_energy - *exact;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iters <= 0) throw ValidationError("max_iters must be positive");
  if (!(grad_tol > 0.0) || !(energy_tol > 0.0)) throw ValidationError("tolerances must be positive");
  if (history_size <= 0) throw ValidationError("history_size must be positive");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t branch) {
  // splitmix64 of (seed, branch)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (branch + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

OptimizationRecord minimize(const Objective& objective, const ParamVector& x0, const OptimizerConfig& cfg) {
  cfg.validate();
  if (!x0.in_bounds()) throw ValidationError("initial parameters lie outside their bounds");
  const auto start = Clock::now();
  const std::size_t n = x0.size();
  std::vector<double> width(n);
  std::vector<double> u0(n);
  for (std::size_t i = 0; i < n; ++i) {
    width[i] = x0.upper[i] - x0.lower[i];
    u0[i] = width[i] > 0.0 ? (x0.values[i] - x0.lower[i]) / width[i] : 0.0;
  }
  auto to_params = [&](const std::vector<double>& u) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = width[i] > 0.0 ? std::clamp(x0.lower[i] + u[i] * width[i], x0.lower[i], x0.upper[i])
                            : x0.values[i];
    }
    return x0.with_values(std::move(v));
  };

  OptimizationRecord rec;
  rec.best_params = x0;
  rec.best_energy = std::numeric_limits<double>::infinity();
  auto consider = [&](const ParamVector& p, double e) {
    if (e < rec.best_energy) {
      rec.best_energy = e;
      rec.best_params = p;
    }
  };
  const ValueGradientFn fn = [&](const std::vector<double>& u, std::vector<double>* grad) {
    const ParamVector p = to_params(u);
    if (!grad) {
      ++rec.n_energy_evals;
      const double e = objective.energy(p);
      consider(p, e);
      return e;
    }
    ++rec.n_grad_evals;
    const GradientReport g = objective.gradient(p);
    for (std::size_t i = 0; i < n; ++i) (*grad)[i] = g.grad[i] * width[i];
    consider(p, g.energy);
    return g.energy;
  };

  BoxLbfgsConfig lcfg;
  lcfg.max_iters = cfg.max_iters;
  lcfg.grad_tol = cfg.grad_tol;
  lcfg.energy_tol = cfg.energy_tol;
  lcfg.history = cfg.history_size;
  std::vector<double> lo(n, 0.0);
  std::vector<double> hi(n, 1.0);
  try {
    const BoxLbfgsResult r = minimize_box(fn, u0, lo, hi, lcfg);
    rec.converged = r.converged;
    rec.stop_reason = r.reason;
    rec.trace = r.trace;
    rec.iterations = r.iterations;
  } catch (const Error& e) {
    rec.aborted = true;
    rec.stop_reason = std::string("aborted: ") + e.what();
    if (!std::isfinite(rec.best_energy)) throw;
  }
  fill_diagnostics(objective, rec);
  rec.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return rec;
}

ParamVector random_start(const Objective& objective, std::mt19937_64& rng) {
  ParamVector p = objective.initial_params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    p.values[i] = p.lower[i] + uniform01(rng) * (p.upper[i] - p.lower[i]);
  }
  // Canonicalize switch-time order.
  return objective.pack_set(objective.pulses(p));
}

MultistartResult multistart(const Objective& objective, int n_starts, const OptimizerConfig& cfg) {
  if (n_starts < 1) throw ValidationError("n_starts must be >= 1");
  std::vector<std::optional<OptimizationRecord>> runs(static_cast<std::size_t>(n_starts));
  std::vector<std::string> failures(static_cast<std::size_t>(n_starts));
  detail::parallel_for(runs.size(), cfg.threads, [&](std::size_t i) {
    try {
      ParamVector x0;
      if (i == 0) {
        x0 = objective.initial_params();
      } else {
        std::mt19937_64 rng(derive_seed(cfg.seed, i));
        x0 = random_start(objective, rng);
      }
      OptimizationRecord rec = minimize(objective, x0, cfg);
      rec.start_index = static_cast<int>(i);
      runs[i] = std::move(rec);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  MultistartResult result;
  int best = -1;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i]) continue;
    if (best < 0 || runs[i]->best_energy < runs[static_cast<std::size_t>(best)]->best_energy) {
      best = static_cast<int>(i);
    }
  }
  if (best < 0) {
    std::string msg = "all " + std::to_string(n_starts) + " starts failed";
    if (!failures.empty()) msg += ": " + failures.front();
    throw NumericalError(msg);
  }
  for (auto& r : runs) {
    if (r) result.runs.push_back(*r);
  }
  result.best = *runs[static_cast<std::size_t>(best)];
  return result;
}

std::vector<OptimizationRecord> adaptive_optimize(const ObjectiveSpec& spec, const AdaptiveOptions& options,
                                                  const OptimizerConfig& cfg) {
  if (spec.pulse_template.kind != PulseKind::square) throw ValidationError("adaptive mode needs square pulses");
  if (!(options.target_error > 0.0)) throw ValidationError("target_error must be positive");
  if (options.max_segments < 1) throw ValidationError("max_segments must be >= 1");

  ObjectiveSpec stage = spec;
  stage.mode = PackMode::adaptive;
  // Collapse the template to one segment per transmon.
  for (auto& p : stage.pulse_template.square) {
    const double first = p.amps.empty() ? 0.0 : p.amps.front();
    p.amps.assign(1, std::clamp(first, -stage.bounds.amp_bound, stage.bounds.amp_bound));
    p.switch_times.clear();
  }

  std::vector<OptimizationRecord> records;
  std::mt19937_64 rng(derive_seed(cfg.seed, 0xADA7));
  {
    const Objective objective(stage);
    OptimizerConfig first = cfg;
    first.seed = derive_seed(cfg.seed, 1);
    records.push_back(multistart(objective, std::max(1, options.initial_starts), first).best);
  }
  while (static_cast<int>(records.back().segments) < options.max_segments) {
    const auto& last = records.back();
    if (std::isfinite(last.error_vs_fci) && last.error_vs_fci <= options.target_error) break;
    if (!std::isfinite(last.error_vs_fci) && records.size() >= 3) {
      const double gain1 = records[records.size() - 2].best_energy - last.best_energy;
      const double gain2 = records[records.size() - 3].best_energy - records[records.size() - 2].best_energy;
      if (gain1 < options.stagnation && gain2 < options.stagnation) break;
    }
    PulseSet next = last.pulses;
    for (auto& p : next.square) p = split_largest_segment(p, next.total_time, rng);
    stage.pulse_template = next;
    const Objective objective(stage);
    records.push_back(minimize(objective, objective.initial_params(), cfg));
  }
  return records;
}

PulseSet rescale_duration(const PulseSet& set, double total_time) {
  if (!(total_time > 0.0)) throw ValidationError("duration must be positive");
  PulseSet out = set;
  const double scale = total_time / set.total_time;
  out.total_time = total_time;
  for (auto& p : out.square) {
    for (auto& t : p.switch_times) t *= scale;
  }
  for (auto& p : out.gaussian) {
    for (auto& c : p.components) {
      c.center *= scale;
      c.width *= scale;
    }
  }
  return out;
}

DurationSearchResult duration_search(const ObjectiveSpec& spec, const std::vector<double>& durations,
                                     double target_error, int n_starts, const OptimizerConfig& cfg) {
  if (!std::is_sorted(durations.begin(), durations.end())) {
    throw ValidationError("durations must be ascending");
  }
  DurationSearchResult result;
  for (std::size_t i = 0; i < durations.size(); ++i) {
    ObjectiveSpec stage = spec;
    stage.pulse_template = rescale_duration(spec.pulse_template, durations[i]);
    if (stage.evolution.dt > durations[i]) stage.evolution.dt = durations[i];
    const Objective objective(stage);
    OptimizerConfig run = cfg;
    run.seed = derive_seed(cfg.seed, 100 + i);
    OptimizationRecord rec = multistart(objective, n_starts, run).best;
    const bool feasible = std::isfinite(rec.error_vs_fci) ? rec.error_vs_fci <= target_error
                                                          : std::isinf(target_error);
    if (feasible && !result.minimal_time) result.minimal_time = durations[i];
    result.records.emplace(durations[i], std::move(rec));
  }
  return result;
}

}  // namespace pulsevqe
