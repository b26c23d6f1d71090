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

#include <memory>
#include <optional>
#include <vector>

#include "pulsevqe/device.hpp"
#include "pulsevqe/dynamics.hpp"
#include "pulsevqe/hamiltonian.hpp"
#include "pulsevqe/pulse.hpp"

namespace pulsevqe {

enum class Normalization { normalized, unnormalized };

struct FiniteDifferenceSteps {
  double freq = 1e-6;         // GHz
  double switch_time = 1e-4;  // ns
  double other = 1e-6;        // any remaining non-analytic entry
};

struct ObjectiveSpec {
  QubitHamiltonian hamiltonian;
  TransmonDevice device;
  PulseSet pulse_template;
  PulseBounds bounds = PulseBounds::standard();
  PackMode mode = PackMode::full;
  EvolutionConfig evolution;
  Normalization normalization = Normalization::normalized;
  double spin_lambda = 0.0;
  FiniteDifferenceSteps fd;
};

/// Amplitudes on the 2^N bare computational bitstrings. In normalized mode
/// the result is divided by its norm; throws NumericalError when that norm
/// is below 1e-12.
State project_normalize(const State& state, const TransmonDevice& device, Normalization mode);

/// <S^2> of a normalized qubit state under the penalty operator.
double spin_expectation(const State& state, const PauliSum& penalty);

struct GradientOptions {
  bool amplitudes_only = false;  // skip finite-difference entries (left at 0)
  bool measure_cost = false;     // fill cost_ratio by timing one energy evaluation
};

struct GradientReport {
  double energy = 0.0;
  std::vector<double> grad;
  std::vector<bool> analytic_mask;
  double cost_ratio = 0.0;
  double seconds = 0.0;
};

/// Final-state diagnostics of one parameter vector.
struct StateReport {
  double energy = 0.0;
  double leakage = 0.0;
  double overlap = 0.0;  // with the exact ground space; NaN when unavailable
  double projected_norm2 = 0.0;
  State final_state;
  State projected;
};

/// Objective E(params) for one (Hamiltonian, device, pulse template) problem.
/// Immutable after construction; every method is safe to call concurrently.
class Objective {
 public:
  explicit Objective(ObjectiveSpec spec);

  const ObjectiveSpec& spec() const { return spec_; }
  const Propagator& propagator() const { return *propagator_; }
  const State& initial_state() const { return psi0_; }
  /// Exact ground energy when the qubit count allows diagonalization.
  std::optional<double> exact_energy() const { return exact_energy_; }

  /// Packs the template under the spec's mode and bounds.
  ParamVector initial_params() const;
  ParamVector pack_set(const PulseSet& set) const;
  PulseSet pulses(const ParamVector& params) const;

  double energy(const ParamVector& params) const;
  GradientReport gradient(const ParamVector& params, const GradientOptions& options = {}) const;
  StateReport report(const ParamVector& params) const;

  /// Energy of a full-space interaction-frame state under the spec's
  /// normalization and spin penalty.
  double state_energy(const State& full_state) const;
  /// dE/dpsi* for the same functional.
  State state_energy_gradient(const State& full_state) const;

  /// Finite-difference derivative of entry i (central, one-sided at bounds).
  double finite_difference(const ParamVector& params, std::size_t i, double h) const;
  double fd_step(ParamRole role) const;

 private:
  ObjectiveSpec spec_;
  std::shared_ptr<const Propagator> propagator_;
  State psi0_;
  std::vector<Eigen::Index> comp_;
  std::optional<double> exact_energy_;
  std::optional<Eigen::MatrixXcd> ground_space_;  // columns span the ground eigenspace
};

}  // namespace pulsevqe
