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

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace pulsevqe {

using Complex = std::complex<double>;
using State = Eigen::VectorXcd;

/// One weighted Pauli string. Character i acts on qubit i; qubit 0 is the
/// leftmost character and the most significant bit of a basis index.
struct PauliTerm {
  std::string pauli;
  double coeff = 0.0;
};

/// Pauli string compiled to bit masks: P|b> = i^{n_y} (-1)^{|b & z|} |b ^ x>.
struct CompiledPauli {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  int n_y = 0;
  double coeff = 0.0;

  static CompiledPauli compile(const PauliTerm& term);
};

/// Weighted Pauli sum without a separate constant; used for penalty operators.
class PauliSum {
 public:
  PauliSum() = default;
  PauliSum(int n_qubits, std::vector<PauliTerm> terms);

  int n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// out = (sum_i h_i P_i) state, accumulated into a fresh vector.
  State apply(const State& state) const;
  /// <state| sum_i h_i P_i |state>, no normalization check.
  double quadratic_form(const State& state) const;
  Eigen::MatrixXcd dense() const;

 private:
  int n_qubits_ = 0;
  std::vector<PauliTerm> terms_;
  std::vector<CompiledPauli> compiled_;
  // Materialized only for n_qubits <= kDenseQubitLimit.
  std::optional<Eigen::MatrixXcd> dense_;
};

inline constexpr int kDenseQubitLimit = 6;
inline constexpr int kExactGroundQubitLimit = 12;

struct SpinPenalty {
  double lambda = 0.0;
  PauliSum op;
};

struct HamiltonianMetadata {
  std::optional<std::string> molecule;
  std::optional<double> geometry_angstrom;
  std::optional<std::string> basis;
  std::optional<std::string> mapping;
  std::optional<double> fci_energy;
  std::optional<double> hf_energy;
  // Fields we do not interpret are kept so serialization is lossless.
  nlohmann::json extra = nlohmann::json::object();
};

/// Qubit-mapped molecular Hamiltonian: constant + sum_i h_i P_i, energies in
/// Hartree. Immutable once constructed; the constructor validates.
class QubitHamiltonian {
 public:
  QubitHamiltonian(int n_qubits, double constant, std::vector<PauliTerm> terms,
                   std::string reference_state,
                   std::optional<HamiltonianMetadata> metadata = std::nullopt,
                   std::optional<SpinPenalty> spin_penalty = std::nullopt);

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return std::size_t{1} << n_qubits_; }
  double constant() const { return constant_; }
  const std::vector<PauliTerm>& terms() const { return terms_.terms(); }
  const PauliSum& pauli_sum() const { return terms_; }
  const std::string& reference_state() const { return reference_state_; }
  const std::optional<HamiltonianMetadata>& metadata() const { return metadata_; }
  const std::optional<SpinPenalty>& spin_penalty() const { return spin_penalty_; }

  /// Basis index of the reference bitstring.
  std::size_t reference_index() const;
  /// Full dense matrix including the constant on the diagonal.
  Eigen::MatrixXcd dense() const;

 private:
  int n_qubits_;
  double constant_;
  PauliSum terms_;
  std::string reference_state_;
  std::optional<HamiltonianMetadata> metadata_;
  std::optional<SpinPenalty> spin_penalty_;
};

/// Parses the JSON Hamiltonian document. Throws ParseError on malformed
/// input (message names the offending field, or line for syntax errors) and
/// ValidationError on invariant violations.
QubitHamiltonian parse_hamiltonian(std::string_view text);
QubitHamiltonian load_hamiltonian(const std::string& path);
nlohmann::json to_json(const QubitHamiltonian& h);
std::string serialize_hamiltonian(const QubitHamiltonian& h);

/// Basis index of a '0'/'1' bitstring, leftmost character most significant.
std::size_t bitstring_index(std::string_view bits);

/// constant + sum_i h_i <state|P_i|state>. The state must be normalized to
/// 1e-10 and have dimension 2^n_qubits.
double expectation(const State& state, const QubitHamiltonian& h);

struct GroundState {
  double energy = 0.0;
  State state;
};

/// Lowest eigenpair by dense diagonalization; the largest-magnitude
/// amplitude of the returned vector is real and positive.
GroundState exact_ground(const QubitHamiltonian& h);

/// Squared norm of the projection of a normalized state onto the ground
/// eigenspace (all eigenvalues within 1e-10 of the minimum).
double overlap_with_ground(const State& state, const QubitHamiltonian& h);

/// Dense eigendecomposition helper shared by exact_ground and overlap.
struct Spectrum {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;
};
Spectrum diagonalize(const QubitHamiltonian& h);

}  // namespace pulsevqe
