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

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pulsevqe/device.hpp"
#include "pulsevqe/hamiltonian.hpp"
#include "pulsevqe/pulse.hpp"

namespace pulsevqe {

enum class Frame { interaction, lab };

struct EvolutionConfig {
  double dt = 0.01;              // ns
  int snapshot_stride = 0;       // 0 disables snapshots
  Frame frame = Frame::interaction;

  void validate(double total_time) const;
};

struct Snapshot {
  double t = 0.0;        // ns
  double energy = 0.0;   // Hartree, from the probe
  double leakage = 0.0;
};

struct EvolutionResult {
  State final_state;                 // interaction frame, bare Fock basis
  std::vector<Snapshot> trajectory;  // empty unless snapshots were requested
  double norm_drift = 0.0;
};

inline constexpr double kMaxNormDrift = 1e-8;

/// Energy evaluated at snapshot points.
using EnergyProbe = std::function<double(const State&)>;

/// Product Fock state with transmon k in level bits[k].
State embed_reference(std::string_view bits, const TransmonDevice& device);

/// Population outside {|0>,|1>}^N.
double leakage(const State& state, const TransmonDevice& device);

/// Fock indices of the 2^N computational bitstrings, ordered like qubit basis indices.
std::vector<Eigen::Index> computational_indices(const TransmonDevice& device);

/// H_C(t) = sum_k Omega_k(t) (e^{i 2pi nu_k t} a_k + e^{-i 2pi nu_k t} a_k^+), in GHz.
Eigen::MatrixXcd drive_hamiltonian(const TransmonDevice& device, const PulseSet& set, double t);

/// Step boundaries: the uniform dt grid, every switch time, and T.
std::vector<double> time_grid(const PulseSet& set, double dt);

/// Per-step data recorded by a forward pass for the adjoint sweep.
struct ForwardTape {
  std::vector<double> mid;             // step midpoints, ns
  std::vector<double> width;           // step lengths, ns
  std::vector<State> chi;              // split-step state after each step
  std::vector<Eigen::MatrixXcd> drive; // per step, per transmon local unitary (row-major by step)
};

/// Precomputed propagation machinery for one device. Immutable and safe to
/// share between threads.
///
/// Interaction-frame steps use the midpoint rule
///   psi <- exp(-i 2pi h Htilde_C(t_mid)) psi,
/// evaluated as exp(i H_D t_mid) exp(-i h H_C(t_mid)) exp(-i H_D t_mid). The
/// inner factor is a tensor product of single-transmon unitaries, so each step
/// costs one dense H_D phase rotation plus N local m x m updates.
class Propagator {
 public:
  /// Precomputes exp(-i 2pi H_D dt) for `nominal_dt`; other step lengths go
  /// through the spectral decomposition.
  explicit Propagator(const TransmonDevice& device, double nominal_dt = 0.01,
                      std::size_t dimension_budget = kDefaultDimensionBudget);

  const TransmonDevice& device() const { return device_; }
  const StaticSpectrum& spectrum() const { return spectrum_; }
  Eigen::Index dimension() const { return dim_; }

  EvolutionResult evolve(const PulseSet& set, const State& psi0, const EvolutionConfig& config,
                         const EnergyProbe& probe = {}) const;

  /// Interaction-frame evolution that also records the tape needed by `adjoint`.
  State evolve_recorded(const PulseSet& set, const State& psi0, double dt, ForwardTape& tape) const;

  /// Given g = dE/dpsi* at the final interaction-frame state, returns
  /// dE/dOmega_k at every step midpoint: result(k, s).
  Eigen::MatrixXd adjoint(const PulseSet& set, const ForwardTape& tape, const State& g) const;

  /// exp(-i 2pi H_D tau) applied to v.
  State rotate_static(const State& v, double tau) const;

 private:
  EvolutionResult evolve_interaction(const PulseSet& set, const State& psi0,
                                     const EvolutionConfig& config, const EnergyProbe& probe,
                                     ForwardTape* tape) const;
  EvolutionResult evolve_lab(const PulseSet& set, const State& psi0, const EvolutionConfig& config,
                             const EnergyProbe& probe) const;
  Eigen::MatrixXcd local_unitary(double theta, double phase) const;
  void apply_local(const Eigen::MatrixXcd& u, int k, State& v) const;
  void apply_static(const State& in, double tau, State& out) const;
  bool is_nominal(double tau) const;

  TransmonDevice device_;
  Eigen::Index dim_ = 0;
  Eigen::MatrixXcd h_static_;
  StaticSpectrum spectrum_;
  // Single-mode X0 = a + a^+ = W diag(lambda) W^T.
  Eigen::MatrixXd mode_vectors_;
  Eigen::VectorXd mode_values_;
  Eigen::MatrixXd lowering_;
  std::vector<Eigen::Index> strides_;
  double nominal_dt_;
  Eigen::MatrixXcd nominal_step_;          // exp(-i 2pi H_D dt)
  Eigen::MatrixXcd nominal_step_adjoint_;
};

/// Convenience wrapper building a Propagator on the fly.
EvolutionResult evolve(const TransmonDevice& device, const PulseSet& set, const State& psi0,
                       const EvolutionConfig& config, const EnergyProbe& probe = {});

}  // namespace pulsevqe
