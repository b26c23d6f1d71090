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

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace pulsevqe {

struct Coupling {
  int k = 0;
  int l = 0;
  double g = 0.0;  // GHz (2pi applied when matrices are built)
};

inline constexpr std::size_t kDefaultDimensionBudget = 729;  // 3^6

/// N coupled transmons truncated to `levels` Fock states each. Frequencies
/// are stored in GHz; the 2pi factor is applied by the propagators.
struct TransmonDevice {
  int n_transmons = 0;
  int levels = 3;
  std::vector<double> omega;
  std::vector<double> delta;
  std::vector<Coupling> couplings;

  /// Throws ValidationError when an invariant is broken.
  void validate() const;
  std::size_t dimension() const;
  /// Fock index of a per-transmon level assignment; transmon 0 is most significant.
  std::size_t fock_index(const std::vector<int>& levels_per_transmon) const;

  /// First n transmons of the reference four-transmon device: a single
  /// coupling for n = 2, a closed ring for n >= 3.
  static TransmonDevice table_one(int n, int levels = 3);
};

TransmonDevice parse_device(std::string_view text);
TransmonDevice load_device(const std::string& path);
nlohmann::json to_json(const TransmonDevice& device);

/// H_D = sum_k (omega_k n_k - delta_k/2 a_k^+ a_k^+ a_k a_k)
///     + sum_<kl> g_kl (a_k^+ a_l + a_l^+ a_k), in GHz, bare Fock basis.
Eigen::MatrixXcd build_static_hamiltonian(const TransmonDevice& device,
                                          std::size_t dimension_budget = kDefaultDimensionBudget);

/// I (x) ... (x) a (x) ... (x) I with a|n> = sqrt(n)|n-1> in slot k.
Eigen::MatrixXcd lowering_operator(const TransmonDevice& device, int k);

/// Single-mode m x m lowering operator.
Eigen::MatrixXd single_mode_lowering(int levels);

/// Total excitation number operator, diagonal in the bare basis.
Eigen::VectorXd excitation_numbers(const TransmonDevice& device);

struct StaticSpectrum {
  Eigen::VectorXd energies;       // ascending, GHz
  Eigen::MatrixXcd basis_change;  // columns are eigenvectors in the bare basis
};

StaticSpectrum eigendecompose_static(const TransmonDevice& device,
                                     std::size_t dimension_budget = kDefaultDimensionBudget);

}  // namespace pulsevqe
