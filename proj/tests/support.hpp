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

#include <random>
#include <string>

#include <Eigen/Dense>

#include "pulsevqe/hamiltonian.hpp"

namespace pulsevqe::testing_support {

inline std::string data_path(const std::string& rel) { return std::string(PULSEVQE_DATA_DIR) + "/" + rel; }

inline std::string fixture(const std::string& name) { return data_path("fixtures/" + name); }

inline State random_state(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  State s(dim);
  for (Eigen::Index i = 0; i < dim; ++i) s(i) = Complex(n(rng), n(rng));
  return s / s.norm();
}

}  // namespace pulsevqe::testing_support
