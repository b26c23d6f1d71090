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
#include <vector>

#include "pulsevqe/objective.hpp"

namespace pulsevqe {

struct NoiseRow {
  double sigma = 0.0;
  double mean_error = 0.0;  // Hartree, vs exact ground (or vs the unperturbed energy when unavailable)
  double std_error = 0.0;
  int samples = 0;
};

/// Perturbs every parameter by N(0, sigma) in its native unit, clamps to the
/// bounds and averages the energy error over n_samples draws per sigma.
/// sigma = 0 evaluates the unperturbed point once per sample.
std::vector<NoiseRow> noise_study(const Objective& objective, const ParamVector& params,
                                  const std::vector<double>& sigmas, int n_samples, std::uint64_t seed,
                                  int threads = 0);

}  // namespace pulsevqe
