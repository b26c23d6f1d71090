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

#include "pulsevqe/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pulsevqe/error.hpp"

namespace pulsevqe {

namespace {

using nlohmann::json;

constexpr double kNormTolerance = 1e-10;
constexpr double kDegeneracyTolerance = 1e-10;

Complex i_power(int n) {
  switch (n & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void validate_terms(int n_qubits, const std::vector<PauliTerm>& terms,
                    const std::string& where) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    const std::string label = where + "[" + std::to_string(i) + "]";
    if (static_cast<int>(t.pauli.size()) != n_qubits) {
      throw ValidationError(label + ": pauli string '" + t.pauli + "' has length " +
                            std::to_string(t.pauli.size()) + ", expected " +
                            std::to_string(n_qubits));
    }
    for (char c : t.pauli) {
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        throw ValidationError(label + ": invalid Pauli character '" + std::string(1, c) + "'");
      }
    }
    if (!std::isfinite(t.coeff)) {
      throw ValidationError(label + ": coefficient is not finite");
    }
    if (!seen.insert(t.pauli).second) {
      throw ValidationError(label + ": duplicate pauli string '" + t.pauli + "'");
    }
  }
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

template <typename T>
T require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError("missing field '" + where + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError("field '" + where + key + "' has wrong type: " + e.what());
  }
}

std::vector<PauliTerm> parse_terms(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParseError("field '" + where + "' must be an array");
  std::vector<PauliTerm> terms;
  terms.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string item = where + "[" + std::to_string(i) + "].";
    terms.push_back({require<std::string>(arr[i], "pauli", item),
                     require<double>(arr[i], "coeff", item)});
  }
  return terms;
}

json terms_to_json(const std::vector<PauliTerm>& terms) {
  json arr = json::array();
  for (const auto& t : terms) arr.push_back({{"pauli", t.pauli}, {"coeff", t.coeff}});
  return arr;
}

}  // namespace

CompiledPauli CompiledPauli::compile(const PauliTerm& term) {
  CompiledPauli c;
  c.coeff = term.coeff;
  const int n = static_cast<int>(term.pauli.size());
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    switch (term.pauli[q]) {
      case 'X': c.x_mask |= bit; break;
      case 'Y': c.x_mask |= bit; c.z_mask |= bit; ++c.n_y; break;
      case 'Z': c.z_mask |= bit; break;
      default: break;
    }
  }
  return c;
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
  if (n_qubits_ <= 0 || n_qubits_ > 30) {
    throw ValidationError("n_qubits must be in [1, 30], got " + std::to_string(n_qubits_));
  }
  validate_terms(n_qubits_, terms_, "terms");
  compiled_.reserve(terms_.size());
  for (const auto& t : terms_) compiled_.push_back(CompiledPauli::compile(t));
  if (n_qubits_ <= kDenseQubitLimit) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits_);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& p : compiled_) {
      const Complex phase = i_power(p.n_y) * p.coeff;
      for (Eigen::Index b = 0; b < dim; ++b) {
        const auto ub = static_cast<std::uint64_t>(b);
        const double sign = (std::popcount(ub & p.z_mask) & 1) ? -1.0 : 1.0;
        m(static_cast<Eigen::Index>(ub ^ p.x_mask), b) += sign * phase;
      }
    }
    dense_ = std::move(m);
  }
}

State PauliSum::apply(const State& state) const {
  if (dense_) return *dense_ * state;
  const auto dim = state.size();
  State out = State::Zero(dim);
  for (const auto& p : compiled_) {
    const Complex phase = i_power(p.n_y) * p.coeff;
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto ub = static_cast<std::uint64_t>(b);
      const double sign = (std::popcount(ub & p.z_mask) & 1) ? -1.0 : 1.0;
      out[static_cast<Eigen::Index>(ub ^ p.x_mask)] += sign * phase * state[b];
    }
  }
  return out;
}

double PauliSum::quadratic_form(const State& state) const {
  if (dense_) return state.dot(*dense_ * state).real();
  double total = 0.0;
  const auto dim = state.size();
  for (const auto& p : compiled_) {
    const Complex phase = i_power(p.n_y);
    Complex acc{0.0, 0.0};
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto ub = static_cast<std::uint64_t>(b);
      const double sign = (std::popcount(ub & p.z_mask) & 1) ? -1.0 : 1.0;
      acc += std::conj(state[static_cast<Eigen::Index>(ub ^ p.x_mask)]) * sign * state[b];
    }
    total += p.coeff * (phase * acc).real();
  }
  return total;
}

Eigen::MatrixXcd PauliSum::dense() const {
  if (dense_) return *dense_;
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits_);
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) m.col(j) = apply(State::Unit(dim, j));
  return m;
}

QubitHamiltonian::QubitHamiltonian(int n_qubits, double constant, std::vector<PauliTerm> terms,
                                   std::string reference_state,
                                   std::optional<HamiltonianMetadata> metadata,
                                   std::optional<SpinPenalty> spin_penalty)
    : n_qubits_(n_qubits),
      constant_(constant),
      terms_(n_qubits, std::move(terms)),
      reference_state_(std::move(reference_state)),
      metadata_(std::move(metadata)),
      spin_penalty_(std::move(spin_penalty)) {
  if (!std::isfinite(constant_)) throw ValidationError("constant is not finite");
  if (static_cast<int>(reference_state_.size()) != n_qubits_ ||
      reference_state_.find_first_not_of("01") != std::string::npos) {
    throw ValidationError("reference_state '" + reference_state_ + "' must be a bitstring of length " +
                          std::to_string(n_qubits_));
  }
  if (spin_penalty_) {
    if (spin_penalty_->op.n_qubits() != n_qubits_) {
      throw ValidationError("spin_penalty acts on a different number of qubits");
    }
    if (!std::isfinite(spin_penalty_->lambda) || spin_penalty_->lambda < 0.0) {
      throw ValidationError("spin_penalty.lambda must be finite and non-negative");
    }
  }
}

std::size_t QubitHamiltonian::reference_index() const { return bitstring_index(reference_state_); }

Eigen::MatrixXcd QubitHamiltonian::dense() const {
  Eigen::MatrixXcd m = terms_.dense();
  m.diagonal().array() += constant_;
  return m;
}

std::size_t bitstring_index(std::string_view bits) {
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError("invalid bitstring '" + std::string(bits) + "'");
    index = (index << 1) | static_cast<std::size_t>(c == '1');
  }
  return index;
}

QubitHamiltonian parse_hamiltonian(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at line " + std::to_string(line_of_offset(text, e.byte)) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("Hamiltonian document must be a JSON object");

  const int n_qubits = require<int>(doc, "n_qubits", "");
  const double constant = require<double>(doc, "constant", "");
  if (!doc.contains("terms")) throw ParseError("missing field 'terms'");
  auto terms = parse_terms(doc["terms"], "terms");
  const auto reference = require<std::string>(doc, "reference_state", "");

  std::optional<HamiltonianMetadata> metadata;
  if (doc.contains("metadata") && !doc["metadata"].is_null()) {
    const json& m = doc["metadata"];
    if (!m.is_object()) throw ParseError("field 'metadata' must be an object");
    HamiltonianMetadata md;
    auto opt_string = [&](const char* key, std::optional<std::string>& dst) {
      if (m.contains(key)) dst = require<std::string>(m, key, "metadata.");
    };
    auto opt_double = [&](const char* key, std::optional<double>& dst) {
      if (m.contains(key)) dst = require<double>(m, key, "metadata.");
    };
    opt_string("molecule", md.molecule);
    opt_double("geometry_angstrom", md.geometry_angstrom);
    opt_string("basis", md.basis);
    opt_string("mapping", md.mapping);
    opt_double("fci_energy", md.fci_energy);
    opt_double("hf_energy", md.hf_energy);
    for (const auto& [key, value] : m.items()) {
      if (key != "molecule" && key != "geometry_angstrom" && key != "basis" && key != "mapping" &&
          key != "fci_energy" && key != "hf_energy") {
        md.extra[key] = value;
      }
    }
    metadata = std::move(md);
  }

  std::optional<SpinPenalty> penalty;
  if (doc.contains("spin_penalty") && !doc["spin_penalty"].is_null()) {
    const json& sp = doc["spin_penalty"];
    const double lambda = require<double>(sp, "lambda", "spin_penalty.");
    if (!sp.contains("terms")) throw ParseError("missing field 'spin_penalty.terms'");
    penalty = SpinPenalty{lambda, PauliSum(n_qubits, parse_terms(sp["terms"], "spin_penalty.terms"))};
  }
  return QubitHamiltonian(n_qubits, constant, std::move(terms), reference, std::move(metadata),
                          std::move(penalty));
}

QubitHamiltonian load_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open Hamiltonian file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_hamiltonian(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

nlohmann::json to_json(const QubitHamiltonian& h) {
  json doc;
  doc["n_qubits"] = h.n_qubits();
  doc["constant"] = h.constant();
  doc["terms"] = terms_to_json(h.terms());
  doc["reference_state"] = h.reference_state();
  if (const auto& md = h.metadata()) {
    json m = md->extra;
    if (md->molecule) m["molecule"] = *md->molecule;
    if (md->geometry_angstrom) m["geometry_angstrom"] = *md->geometry_angstrom;
    if (md->basis) m["basis"] = *md->basis;
    if (md->mapping) m["mapping"] = *md->mapping;
    if (md->fci_energy) m["fci_energy"] = *md->fci_energy;
    if (md->hf_energy) m["hf_energy"] = *md->hf_energy;
    doc["metadata"] = std::move(m);
  }
  if (const auto& sp = h.spin_penalty()) {
    doc["spin_penalty"] = {{"lambda", sp->lambda}, {"terms", terms_to_json(sp->op.terms())}};
  }
  return doc;
}

std::string serialize_hamiltonian(const QubitHamiltonian& h) { return to_json(h).dump(2); }

double expectation(const State& state, const QubitHamiltonian& h) {
  if (static_cast<std::size_t>(state.size()) != h.dimension()) {
    throw DimensionError("state dimension " + std::to_string(state.size()) +
                         " does not match 2^" + std::to_string(h.n_qubits()));
  }
  const double norm = state.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw NumericalError("expectation requires a normalized state (norm " + std::to_string(norm) +
                         "); project and normalize first");
  }
  return h.constant() + h.pauli_sum().quadratic_form(state);
}

Spectrum diagonalize(const QubitHamiltonian& h) {
  if (h.n_qubits() > kExactGroundQubitLimit) {
    throw ValidationError("exact diagonalization limited to " +
                          std::to_string(kExactGroundQubitLimit) + " qubits, got " +
                          std::to_string(h.n_qubits()));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.dense());
  if (solver.info() != Eigen::Success) throw NumericalError("Hamiltonian diagonalization failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

GroundState exact_ground(const QubitHamiltonian& h) {
  const Spectrum spec = diagonalize(h);
  State v = spec.vectors.col(0);
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v *= std::abs(v[imax]) / v[imax];
  v.normalize();
  return {spec.energies[0], std::move(v)};
}

double overlap_with_ground(const State& state, const QubitHamiltonian& h) {
  if (static_cast<std::size_t>(state.size()) != h.dimension()) {
    throw DimensionError("state dimension " + std::to_string(state.size()) +
                         " does not match 2^" + std::to_string(h.n_qubits()));
  }
  const Spectrum spec = diagonalize(h);
  const double e0 = spec.energies[0];
  double total = 0.0;
  for (Eigen::Index k = 0; k < spec.energies.size(); ++k) {
    if (spec.energies[k] - e0 > kDegeneracyTolerance) break;
    total += std::norm(spec.vectors.col(k).dot(state));
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace pulsevqe
