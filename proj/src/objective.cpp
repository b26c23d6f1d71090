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

#include "pulsevqe/objective.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "pulsevqe/error.hpp"

namespace pulsevqe {

namespace {

constexpr double kMinProjectedNorm = 1e-12;
constexpr double kGroundDegeneracy = 1e-10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

State project_normalize(const State& state, const TransmonDevice& device, Normalization mode) {
  if (static_cast<std::size_t>(state.size()) != device.dimension()) {
    throw DimensionError("state dimension does not match the device");
  }
  const auto comp = computational_indices(device);
  State p(static_cast<Eigen::Index>(comp.size()));
  for (std::size_t b = 0; b < comp.size(); ++b) p[static_cast<Eigen::Index>(b)] = state[comp[b]];
  if (mode == Normalization::normalized) {
    const double norm = p.norm();
    if (norm < kMinProjectedNorm) throw NumericalError("state has leaked out of the computational subspace");
    p /= norm;
  }
  return p;
}

double spin_expectation(const State& state, const PauliSum& penalty) {
  if (penalty.empty()) throw ValidationError("no spin penalty operator loaded");
  if (static_cast<std::size_t>(state.size()) != (std::size_t{1} << penalty.n_qubits())) {
    throw DimensionError("state dimension does not match the spin operator");
  }
  return penalty.quadratic_form(state);
}

Objective::Objective(ObjectiveSpec spec) : spec_(std::move(spec)) {
  spec_.device.validate();
  spec_.pulse_template.validate();
  if (spec_.hamiltonian.n_qubits() != spec_.device.n_transmons) {
    throw ValidationError("Hamiltonian has " + std::to_string(spec_.hamiltonian.n_qubits()) +
                          " qubits but the device has " + std::to_string(spec_.device.n_transmons) +
                          " transmons");
  }
  if (spec_.pulse_template.size() != static_cast<std::size_t>(spec_.device.n_transmons)) {
    throw ValidationError("pulse template must hold one pulse per transmon");
  }
  if (spec_.spin_lambda < 0.0) throw ValidationError("spin_lambda must be >= 0");
  if (spec_.spin_lambda > 0.0 && !spec_.hamiltonian.spin_penalty()) {
    throw ValidationError("spin_lambda > 0 requires a spin_penalty operator in the Hamiltonian");
  }
  if (spec_.mode == PackMode::adaptive && spec_.pulse_template.kind != PulseKind::square) {
    throw ValidationError("adaptive packing requires square pulses");
  }
  spec_.evolution.validate(spec_.pulse_template.total_time);
  propagator_ = std::make_shared<const Propagator>(spec_.device, spec_.evolution.dt);
  psi0_ = embed_reference(spec_.hamiltonian.reference_state(), spec_.device);
  comp_ = computational_indices(spec_.device);
  if (spec_.hamiltonian.n_qubits() <= kExactGroundQubitLimit) {
    const Spectrum s = diagonalize(spec_.hamiltonian);
    exact_energy_ = s.energies[0];
    Eigen::Index count = 1;
    while (count < s.energies.size() && s.energies[count] - s.energies[0] <= kGroundDegeneracy) ++count;
    ground_space_ = s.vectors.leftCols(count);
  }
}

ParamVector Objective::initial_params() const { return pack_set(spec_.pulse_template); }

ParamVector Objective::pack_set(const PulseSet& set) const {
  return pack(set, spec_.mode, spec_.bounds, spec_.device.omega);
}

PulseSet Objective::pulses(const ParamVector& params) const { return unpack(params, spec_.pulse_template); }

double Objective::state_energy(const State& full) const {
  State p(static_cast<Eigen::Index>(comp_.size()));
  for (std::size_t b = 0; b < comp_.size(); ++b) p[static_cast<Eigen::Index>(b)] = full[comp_[b]];
  const double n2 = p.squaredNorm();
  double q = spec_.hamiltonian.pauli_sum().quadratic_form(p);
  if (spec_.spin_lambda > 0.0) q += spec_.spin_lambda * spec_.hamiltonian.spin_penalty()->op.quadratic_form(p);
  if (spec_.normalization == Normalization::normalized) {
    if (n2 < kMinProjectedNorm * kMinProjectedNorm) {
      throw NumericalError("state has leaked out of the computational subspace");
    }
    return q / n2 + spec_.hamiltonian.constant();
  }
  return q + spec_.hamiltonian.constant() * n2;
}

State Objective::state_energy_gradient(const State& full) const {
  State p(static_cast<Eigen::Index>(comp_.size()));
  for (std::size_t b = 0; b < comp_.size(); ++b) p[static_cast<Eigen::Index>(b)] = full[comp_[b]];
  State kp = spec_.hamiltonian.pauli_sum().apply(p);
  if (spec_.spin_lambda > 0.0) kp += spec_.spin_lambda * spec_.hamiltonian.spin_penalty()->op.apply(p);
  State gp;
  if (spec_.normalization == Normalization::normalized) {
    const double n2 = p.squaredNorm();
    if (n2 < kMinProjectedNorm * kMinProjectedNorm) {
      throw NumericalError("state has leaked out of the computational subspace");
    }
    const double e = p.dot(kp).real() / n2;
    gp = (kp - e * p) / n2;
  } else {
    gp = kp + spec_.hamiltonian.constant() * p;
  }
  State g = State::Zero(full.size());
  for (std::size_t b = 0; b < comp_.size(); ++b) g[comp_[b]] = gp[static_cast<Eigen::Index>(b)];
  return g;
}

double Objective::energy(const ParamVector& params) const {
  EvolutionConfig config = spec_.evolution;
  config.snapshot_stride = 0;
  const EvolutionResult r = propagator_->evolve(pulses(params), psi0_, config);
  return state_energy(r.final_state);
}

double Objective::fd_step(ParamRole role) const {
  switch (role) {
    case ParamRole::freq: return spec_.fd.freq;
    case ParamRole::switch_time: return spec_.fd.switch_time;
    default: return spec_.fd.other;
  }
}

double Objective::finite_difference(const ParamVector& params, std::size_t i, double h) const {
  const double x = params.values[i];
  auto at = [&](double v) {
    std::vector<double> vals = params.values;
    vals[i] = v;
    return energy(params.with_values(std::move(vals)));
  };
  if (x + h > params.upper[i]) return (energy(params) - at(x - h)) / h;
  if (x - h < params.lower[i]) return (at(x + h) - energy(params)) / h;
  return (at(x + h) - at(x - h)) / (2.0 * h);
}

GradientReport Objective::gradient(const ParamVector& params, const GradientOptions& options) const {
  if (spec_.evolution.frame != Frame::interaction) {
    throw ValidationError("analytic gradients require the interaction frame");
  }
  const auto start = Clock::now();
  const PulseSet set = pulses(params);
  ForwardTape tape;
  const State final_state = propagator_->evolve_recorded(set, psi0_, spec_.evolution.dt, tape);
  GradientReport report;
  report.energy = state_energy(final_state);
  const Eigen::MatrixXd sens = propagator_->adjoint(set, tape, state_energy_gradient(final_state));

  const std::size_t n = params.size();
  report.grad.assign(n, 0.0);
  report.analytic_mask.assign(n, false);
  const auto steps = static_cast<Eigen::Index>(tape.mid.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& slot = params.layout[i];
    const auto k = static_cast<std::size_t>(slot.transmon);
    const auto row = static_cast<Eigen::Index>(slot.transmon);
    double acc = 0.0;
    switch (slot.role) {
      case ParamRole::amp: {
        const auto& ts = set.square[k].switch_times;
        const double lo = slot.index == 0 ? -1.0 : ts[static_cast<std::size_t>(slot.index) - 1];
        const double hi = static_cast<std::size_t>(slot.index) == ts.size()
                              ? std::numeric_limits<double>::infinity()
                              : ts[static_cast<std::size_t>(slot.index)];
        for (Eigen::Index s = 0; s < steps; ++s) {
          const double mid = tape.mid[static_cast<std::size_t>(s)];
          if (mid >= lo && mid < hi) acc += sens(row, s);
        }
        report.analytic_mask[i] = true;
        break;
      }
      case ParamRole::gauss_amp:
      case ParamRole::gauss_center:
      case ParamRole::gauss_width: {
        const auto& pulse = set.gaussian[k];
        const auto& c = pulse.components[static_cast<std::size_t>(slot.index)];
        for (Eigen::Index s = 0; s < steps; ++s) {
          const double t = tape.mid[static_cast<std::size_t>(s)];
          double raw = 0.0;
          for (const auto& other : pulse.components) {
            const double z = (t - other.center) / other.width;
            raw += other.amp * std::exp(-0.5 * z * z);
          }
          if (std::abs(raw) >= pulse.clip) continue;  // clipped: envelope locally constant
          const double z = (t - c.center) / c.width;
          const double shape = std::exp(-0.5 * z * z);
          double d = shape;
          if (slot.role == ParamRole::gauss_center) d = c.amp * shape * z / c.width;
          if (slot.role == ParamRole::gauss_width) d = c.amp * shape * z * z / c.width;
          acc += sens(row, s) * d;
        }
        report.analytic_mask[i] = true;
        break;
      }
      case ParamRole::freq:
      case ParamRole::switch_time:
        if (!options.amplitudes_only) acc = finite_difference(params, i, fd_step(slot.role));
        break;
    }
    report.grad[i] = acc;
  }
  report.seconds = seconds_since(start);
  if (options.measure_cost) {
    const auto e_start = Clock::now();
    const double e = energy(params);
    const double e_seconds = seconds_since(e_start);
    (void)e;
    report.cost_ratio = e_seconds > 0.0 ? report.seconds / e_seconds : 0.0;
  }
  return report;
}

StateReport Objective::report(const ParamVector& params) const {
  EvolutionConfig config = spec_.evolution;
  config.snapshot_stride = 0;
  const EvolutionResult r = propagator_->evolve(pulses(params), psi0_, config);
  StateReport out;
  out.final_state = r.final_state;
  out.energy = state_energy(r.final_state);
  out.leakage = leakage(r.final_state, spec_.device);
  const State raw = project_normalize(r.final_state, spec_.device, Normalization::unnormalized);
  out.projected_norm2 = raw.squaredNorm();
  out.projected = raw.norm() > kMinProjectedNorm ? State(raw / raw.norm()) : raw;
  out.overlap = ground_space_ ? (ground_space_->adjoint() * out.projected).squaredNorm()
                              : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace pulsevqe
