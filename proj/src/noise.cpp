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

#include "pulsevqe/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "parallel.hpp"
#include "pulsevqe/error.hpp"
#include "pulsevqe/optimize.hpp"

namespace pulsevqe {

std::vector<NoiseRow> noise_study(const Objective& objective, const ParamVector& params,
                                  const std::vector<double>& sigmas, int n_samples, std::uint64_t seed,
                                  int threads) {
  if (n_samples < 1) throw ValidationError("n_samples must be >= 1");
  for (double s : sigmas) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ValidationError("sigma must be finite and >= 0");
  }
  const double reference = objective.exact_energy().value_or(objective.energy(params));
  std::vector<NoiseRow> rows;
  rows.reserve(sigmas.size());
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    const double sigma = sigmas[si];
    std::vector<double> errors(static_cast<std::size_t>(n_samples));
    detail::parallel_for(errors.size(), threads, [&](std::size_t i) {
      std::mt19937_64 rng(derive_seed(derive_seed(seed, si), i));
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> v = params.values;
      if (sigma > 0.0) {
        for (std::size_t j = 0; j < v.size(); ++j) {
          v[j] = std::clamp(v[j] + sigma * normal(rng), params.lower[j], params.upper[j]);
        }
      }
      errors[i] = objective.energy(params.with_values(std::move(v))) - reference;
    });
    NoiseRow row;
    row.sigma = sigma;
    row.samples = n_samples;
    double sum = 0.0;
    for (double e : errors) sum += e;
    row.mean_error = sum / n_samples;
    if (n_samples > 1) {
      double ss = 0.0;
      for (double e : errors) ss += (e - row.mean_error) * (e - row.mean_error);
      row.std_error = std::sqrt(ss / (n_samples - 1) / n_samples);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pulsevqe
