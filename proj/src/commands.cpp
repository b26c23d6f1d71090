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

#include "pulsevqe/commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "pulsevqe/error.hpp"
#include "pulsevqe/noise.hpp"
#include "pulsevqe/objective.hpp"
#include "pulsevqe/optimize.hpp"
#include "pulsevqe/records.hpp"

namespace pulsevqe {

namespace {

struct Common {
  std::vector<std::string> hamiltonians;
  std::string device;
  std::string pulse;
  double dt = 0.01;
  std::uint64_t seed = 0;
  std::string out;
  bool normalized = false;
  bool unnormalized = false;
  double spin_lambda = 0.0;
  std::optional<double> amp_bound;
  std::optional<double> freq_window;
  double total_time = 10.0;
  int segments = 1;
  int threads = 0;
  int max_iters = 1000;
};

void add_common(CLI::App* sub, Common& c, bool multi_hamiltonian = false) {
  if (multi_hamiltonian) {
    sub->add_option("--hamiltonian", c.hamiltonians, "Hamiltonian files")->required();
  } else {
    sub->add_option("--hamiltonian", c.hamiltonians, "Hamiltonian file")->required()->expected(1);
  }
  sub->add_option("--device", c.device, "Device file (default: reference device sized to the Hamiltonian)");
  sub->add_option("--pulse", c.pulse, "Pulse file");
  sub->add_option("--dt", c.dt, "Time step, ns");
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--out", c.out, "Output directory");
  auto* norm = sub->add_flag("--normalized", c.normalized, "Normalize the projected state (default)");
  auto* unnorm = sub->add_flag("--unnormalized", c.unnormalized, "Use the raw projected state");
  norm->excludes(unnorm);
  sub->add_option("--spin-lambda", c.spin_lambda, "Spin penalty weight");
  sub->add_option("--amp-bound", c.amp_bound, "Amplitude bound, GHz");
  sub->add_option("--freq-window", c.freq_window, "Drive frequency window around each transmon, GHz");
  sub->add_option("--time", c.total_time, "Pulse duration when no pulse file is given, ns");
  sub->add_option("--segments", c.segments, "Square segments per transmon when no pulse file is given");
  sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  sub->add_option("--max-iters", c.max_iters, "Optimizer iteration budget");
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

ObjectiveSpec build_spec(const Common& c, const std::string& hamiltonian_path, PulseBounds bounds,
                         PackMode mode = PackMode::full) {
  QubitHamiltonian h = load_hamiltonian(hamiltonian_path);
  TransmonDevice device = c.device.empty() ? TransmonDevice::table_one(h.n_qubits()) : load_device(c.device);
  PulseSet pulse;
  if (!c.pulse.empty()) {
    pulse = load_pulse_set(c.pulse);
  } else {
    if (c.segments < 1) throw ValidationError("--segments must be >= 1");
    pulse = PulseSet::zero_square(static_cast<std::size_t>(device.n_transmons), c.total_time, device.omega,
                                  static_cast<std::size_t>(c.segments));
  }
  if (c.amp_bound) bounds.amp_bound = *c.amp_bound;
  if (c.freq_window) bounds.freq_window = *c.freq_window;
  ObjectiveSpec spec{std::move(h), std::move(device), std::move(pulse), bounds, mode, {}, {}, 0.0, {}};
  spec.evolution.dt = c.dt;
  spec.normalization = c.unnormalized ? Normalization::unnormalized : Normalization::normalized;
  spec.spin_lambda = c.spin_lambda;
  return spec;
}

OptimizerConfig optimizer_config(const Common& c) {
  OptimizerConfig cfg;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  cfg.max_iters = c.max_iters;
  return cfg;
}

std::string out_path(const Common& c, const std::string& name) {
  return (std::filesystem::path(c.out) / name).string();
}

template <typename Writer>
void write_csv(const Common& c, const std::string& name, Writer&& writer) {
  if (c.out.empty()) return;
  std::ostringstream os;
  writer(os);
  write_file(out_path(c, name), os.str());
}

void write_json(const Common& c, const std::string& name, const nlohmann::json& j) {
  if (c.out.empty()) return;
  write_file(out_path(c, name), j.dump(2) + "\n");
}

void print_record(std::ostream& out, const OptimizationRecord& rec) {
  out << "energy " << fmt(rec.best_energy) << "\n";
  if (std::isfinite(rec.error_vs_fci)) out << "error_vs_fci " << fmt(rec.error_vs_fci) << "\n";
  out << "leakage " << fmt(rec.leakage_final) << "\n";
  if (std::isfinite(rec.overlap_final)) out << "overlap " << fmt(rec.overlap_final) << "\n";
  out << "segments " << rec.segments << "\n"
      << "iterations " << rec.iterations << "\n"
      << "stop " << rec.stop_reason << "\n"
      << "wall_seconds " << fmt(rec.wall_seconds) << "\n";
}

// Record files leave out wall-clock time so fixed-seed runs are byte-identical.
nlohmann::json record_json(const OptimizationRecord& rec) {
  nlohmann::json j = to_json(rec);
  j.erase("wall_seconds");
  return j;
}

int cmd_exact(const Common& c, std::ostream& out) {
  const QubitHamiltonian h = load_hamiltonian(c.hamiltonians.front());
  const GroundState g = exact_ground(h);
  State ref = State::Zero(static_cast<Eigen::Index>(h.dimension()));
  ref(static_cast<Eigen::Index>(h.reference_index())) = 1.0;
  const double hf = expectation(ref, h);
  out << "fci_energy " << fmt(g.energy) << "\n" << "hf_energy " << fmt(hf) << "\n";
  nlohmann::json j{{"schema_version", kRecordSchemaVersion}, {"fci_energy", g.energy}, {"hf_energy", hf}};
  int code = kExitOk;
  if (h.metadata() && h.metadata()->fci_energy) {
    const double diff = std::abs(*h.metadata()->fci_energy - g.energy);
    j["metadata_fci_deviation"] = diff;
    if (diff > 1e-8) {
      out << "metadata fci_energy differs by " << fmt(diff) << "\n";
      code = kExitCheckFailed;
    }
  }
  write_json(c, "exact.json", j);
  return code;
}

int cmd_evolve(const Common& c, int stride, bool lab, std::ostream& out) {
  ObjectiveSpec spec = build_spec(c, c.hamiltonians.front(), PulseBounds::standard());
  spec.evolution.snapshot_stride = stride;
  spec.evolution.frame = lab ? Frame::lab : Frame::interaction;
  const Objective objective(spec);
  const EnergyProbe probe = [&](const State& s) { return objective.state_energy(s); };
  const EvolutionResult r =
      objective.propagator().evolve(spec.pulse_template, objective.initial_state(), spec.evolution, probe);
  const double e = objective.state_energy(r.final_state);
  const auto exact = objective.exact_energy();
  out << "energy " << fmt(e) << "\n";
  if (exact) out << "error_vs_fci " << fmt(e - *exact) << "\n";
  out << "leakage " << fmt(leakage(r.final_state, spec.device)) << "\n"
      << "norm_drift " << fmt(r.norm_drift) << "\n"
      << "snapshots " << r.trajectory.size() << "\n";
  write_csv(c, "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, r.trajectory, exact); });
  nlohmann::json j{{"schema_version", kRecordSchemaVersion},
                   {"energy", e},
                   {"leakage", leakage(r.final_state, spec.device)},
                   {"norm_drift", r.norm_drift}};
  if (exact) j["error_vs_fci"] = e - *exact;
  write_json(c, "summary.json", j);
  return kExitOk;
}

void write_record_files(const Common& c, const std::string& stem, const OptimizationRecord& rec) {
  write_json(c, stem + ".json", record_json(rec));
  write_json(c, stem + "_pulse.json", to_json(rec.pulses));
  write_csv(c, stem + "_trace.csv", [&](std::ostream& os) { write_trace_csv(os, rec.trace); });
}

int cmd_optimize(const Common& c, int starts, std::ostream& out) {
  const Objective objective(build_spec(c, c.hamiltonians.front(), PulseBounds::standard()));
  const MultistartResult r = multistart(objective, starts, optimizer_config(c));
  print_record(out, r.best);
  out << "best_start " << r.best.start_index << "\n";
  write_record_files(c, "record", r.best);
  return kExitOk;
}

int cmd_adapt(const Common& c, const AdaptiveOptions& options, std::ostream& out) {
  const ObjectiveSpec spec = build_spec(c, c.hamiltonians.front(), PulseBounds::adaptive(), PackMode::adaptive);
  const auto records = adaptive_optimize(spec, options, optimizer_config(c));
  out << "segments,energy,error_vs_fci,leakage,overlap\n";
  for (const auto& rec : records) {
    out << rec.segments << ',' << fmt(rec.best_energy) << ',' << fmt(rec.error_vs_fci) << ','
        << fmt(rec.leakage_final) << ',' << fmt(rec.overlap_final) << "\n";
    write_record_files(c, "record_n" + std::to_string(rec.segments), rec);
  }
  write_csv(c, "adapt.csv", [&](std::ostream& os) {
    os.precision(17);
    os << "# schema_version=" << kRecordSchemaVersion << "\n"
       << "segments,energy_hartree,error_vs_fci,leakage,overlap,iterations\n";
    for (const auto& rec : records) {
      os << rec.segments << ',' << rec.best_energy << ',' << rec.error_vs_fci << ',' << rec.leakage_final << ','
         << rec.overlap_final << ',' << rec.iterations << '\n';
    }
  });
  return kExitOk;
}

int cmd_scan(const Common& c, std::vector<double> durations, int starts, double target, std::ostream& out) {
  if (durations.empty()) durations.push_back(c.total_time);
  std::vector<ScanRow> rows;
  nlohmann::json summary{{"schema_version", kRecordSchemaVersion}, {"points", nlohmann::json::array()}};
  for (std::size_t g = 0; g < c.hamiltonians.size(); ++g) {
    const ObjectiveSpec spec = build_spec(c, c.hamiltonians[g], PulseBounds::standard());
    OptimizerConfig cfg = optimizer_config(c);
    cfg.seed = derive_seed(c.seed, 1000 + g);
    const DurationSearchResult search = duration_search(spec, durations, target, starts, cfg);
    const OptimizationRecord* chosen = nullptr;
    if (search.minimal_time) {
      chosen = &search.records.at(*search.minimal_time);
    } else {
      for (const auto& [t, rec] : search.records) {
        if (!chosen || rec.best_energy < chosen->best_energy) chosen = &rec;
      }
    }
    const auto& h = spec.hamiltonian;
    State ref = State::Zero(static_cast<Eigen::Index>(h.dimension()));
    ref(static_cast<Eigen::Index>(h.reference_index())) = 1.0;
    ScanRow row;
    row.r_angstrom = h.metadata() && h.metadata()->geometry_angstrom ? *h.metadata()->geometry_angstrom
                                                                      : std::numeric_limits<double>::quiet_NaN();
    row.e_hf = expectation(ref, h);
    row.e_ctrlvqe = chosen->best_energy;
    row.e_fci = chosen->best_energy - chosen->error_vs_fci;
    row.error = chosen->error_vs_fci;
    row.leakage = chosen->leakage_final;
    row.overlap = chosen->overlap_final;
    row.pulse_t = chosen->total_time;
    rows.push_back(row);
    out << "r " << fmt(row.r_angstrom) << " T " << fmt(row.pulse_t) << " error " << fmt(row.error) << " overlap "
        << fmt(row.overlap) << (search.minimal_time ? "" : " (target not reached)") << "\n";
    nlohmann::json point{{"hamiltonian", c.hamiltonians[g]},
                         {"minimal_time", search.minimal_time ? nlohmann::json(*search.minimal_time) : nlohmann::json(nullptr)},
                         {"records", nlohmann::json::array()}};
    for (const auto& [t, rec] : search.records) point["records"].push_back(record_json(rec));
    summary["points"].push_back(point);
  }
  write_csv(c, "scan.csv", [&](std::ostream& os) { write_scan_csv(os, rows); });
  write_json(c, "scan.json", summary);
  return kExitOk;
}

int cmd_noise(const Common& c, const std::vector<double>& sigmas, int samples, std::ostream& out) {
  if (c.pulse.empty()) throw ValidationError("noise needs --pulse");
  const Objective objective(build_spec(c, c.hamiltonians.front(), PulseBounds::standard()));
  const auto rows = noise_study(objective, objective.initial_params(), sigmas, samples, c.seed, c.threads);
  out << "sigma,mean_error,stderr\n";
  for (const auto& r : rows) out << r.sigma << ',' << fmt(r.mean_error) << ',' << fmt(r.std_error) << "\n";
  write_csv(c, "noise.csv", [&](std::ostream& os) { write_noise_csv(os, rows); });
  return kExitOk;
}

double deviation(double analytic, double numeric) {
  // Relative error, switching to absolute 1e-9 / 1e-5 scale near zero.
  return std::abs(analytic - numeric) / std::max(std::abs(numeric), 1e-4);
}

int cmd_gradcheck(const Common& c, int random, double h, double threshold, double max_cost, std::ostream& out) {
  const Objective objective(build_spec(c, c.hamiltonians.front(), PulseBounds::standard()));
  std::vector<ParamVector> configs;
  if (!c.pulse.empty() || random == 0) configs.push_back(objective.initial_params());
  for (int i = 0; i < random; ++i) {
    std::mt19937_64 rng(derive_seed(c.seed, static_cast<std::uint64_t>(i)));
    configs.push_back(random_start(objective, rng));
  }
  std::vector<GradcheckRow> rows;
  double worst = 0.0;
  double worst_cost = 0.0;
  for (const auto& params : configs) {
    const GradientReport g = objective.gradient(params);
    for (std::size_t i = 0; i < params.size(); ++i) {
      GradcheckRow row;
      row.index = i;
      row.transmon = params.layout[i].transmon;
      row.role = role_name(params.layout[i].role);
      row.value = params.values[i];
      row.analytic = g.grad[i];
      row.numeric =
          objective.finite_difference(params, i, h > 0.0 ? h : objective.fd_step(params.layout[i].role));
      row.deviation = deviation(row.analytic, row.numeric);
      row.analytic_entry = g.analytic_mask[i];
      worst = std::max(worst, row.deviation);
      rows.push_back(row);
    }
    if (max_cost > 0.0) {
      GradientOptions opts;
      opts.amplitudes_only = true;
      opts.measure_cost = true;
      worst_cost = std::max(worst_cost, objective.gradient(params, opts).cost_ratio);
    }
  }
  out << "configurations " << configs.size() << "\n" << "max_deviation " << fmt(worst) << "\n";
  if (max_cost > 0.0) out << "max_cost_ratio " << fmt(worst_cost) << "\n";
  write_csv(c, "gradcheck.csv", [&](std::ostream& os) { write_gradcheck_csv(os, rows); });
  const bool ok = worst < threshold && (max_cost <= 0.0 || worst_cost <= max_cost);
  out << (ok ? "gradcheck passed" : "gradcheck FAILED") << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pulse-level variational eigensolver on simulated transmons"};
  app.name("pulsevqe");
  app.require_subcommand(1);

  Common c;
  auto* exact = app.add_subcommand("exact", "Exact ground and reference energies");
  add_common(exact, c);

  int stride = 10;
  bool lab = false;
  auto* evolve_cmd = app.add_subcommand("evolve", "Evolve the reference state under a pulse");
  add_common(evolve_cmd, c);
  evolve_cmd->add_option("--snapshots", stride, "Snapshot every N steps (0 disables)");
  evolve_cmd->add_flag("--lab", lab, "Integrate in the lab frame");

  int starts = 1;
  auto* optimize_cmd = app.add_subcommand("optimize", "Optimize pulse parameters");
  add_common(optimize_cmd, c);
  optimize_cmd->add_option("--starts", starts, "Total starts including the template");

  AdaptiveOptions adaptive;
  auto* adapt = app.add_subcommand("adapt", "Grow square pulses segment by segment");
  add_common(adapt, c);
  adapt->add_option("--max-segments", adaptive.max_segments, "Largest segment count");
  adapt->add_option("--target-error", adaptive.target_error, "Stop below this error, Hartree");
  adapt->add_option("--initial-starts", adaptive.initial_starts, "Starts for the single-segment stage");

  std::vector<double> durations;
  double target = 1.6e-3;
  auto* scan = app.add_subcommand("scan", "Duration search over one or more geometries");
  add_common(scan, c, true);
  scan->add_option("--durations", durations, "Pulse durations to try, ns (ascending)");
  scan->add_option("--starts", starts, "Starts per duration including the template");
  scan->add_option("--target-error", target, "Feasibility threshold, Hartree");

  std::vector<double> sigmas{1e-4, 1e-3, 1e-2, 1e-1};
  int samples = 100;
  auto* noise = app.add_subcommand("noise", "Gaussian control-noise study");
  add_common(noise, c);
  noise->add_option("--sigmas", sigmas, "Noise standard deviations, native units");
  noise->add_option("--samples", samples, "Samples per sigma");

  int random = 0;
  double h = 0.0;
  double threshold = 1e-5;
  double max_cost = 0.0;
  auto* gradcheck = app.add_subcommand("gradcheck", "Compare gradients with finite differences");
  gradcheck->set_help_flag("--help", "Print this help message and exit");
  add_common(gradcheck, c);
  gradcheck->add_option("--random", random, "Number of random parameter vectors");
  gradcheck->add_option("--h", h, "Finite-difference step for every entry (default: per role)");
  gradcheck->add_option("--threshold", threshold, "Largest accepted deviation");
  gradcheck->add_option("--max-cost-ratio", max_cost, "Fail if amplitude gradient cost exceeds this ratio");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("pulsevqe");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*exact) return cmd_exact(c, out);
    if (*evolve_cmd) return cmd_evolve(c, stride, lab, out);
    if (*optimize_cmd) return cmd_optimize(c, starts, out);
    if (*adapt) return cmd_adapt(c, adaptive, out);
    if (*scan) return cmd_scan(c, durations, starts, target, out);
    if (*noise) return cmd_noise(c, sigmas, samples, out);
    if (*gradcheck) return cmd_gradcheck(c, random, h, threshold, max_cost, out);
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace pulsevqe
