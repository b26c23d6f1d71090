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

#include "pulsevqe/device.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pulsevqe/error.hpp"

namespace pulsevqe {

namespace {

using nlohmann::json;

// Reference four-transmon device, GHz (units of 2pi GHz in the Hamiltonian).
constexpr double kTableOmega[] = {4.8080, 4.8333, 4.9400, 4.7960};
constexpr double kTableDelta[] = {0.3102, 0.2916, 0.3302, 0.2616};
constexpr double kTableG[] = {0.01831, 0.02131, 0.01931, 0.02031};  // 1-2, 2-3, 3-4, 4-1

std::size_t stride_of(const TransmonDevice& d, int k) {
  std::size_t stride = 1;
  for (int j = d.n_transmons - 1; j > k; --j) stride *= static_cast<std::size_t>(d.levels);
  return stride;
}

}  // namespace

void TransmonDevice::validate() const {
  if (n_transmons <= 0) throw ValidationError("n_transmons must be positive");
  if (levels < 2) throw ValidationError("levels must be >= 2");
  if (static_cast<int>(omega.size()) != n_transmons || static_cast<int>(delta.size()) != n_transmons) {
    throw ValidationError("omega and delta must have n_transmons entries");
  }
  for (int k = 0; k < n_transmons; ++k) {
    if (!(omega[k] > 0.0) || !std::isfinite(omega[k])) {
      throw ValidationError("omega[" + std::to_string(k) + "] must be positive");
    }
    if (!(delta[k] > 0.0) || !std::isfinite(delta[k])) {
      throw ValidationError("delta[" + std::to_string(k) + "] must be positive");
    }
  }
  std::set<std::pair<int, int>> pairs;
  for (const auto& c : couplings) {
    if (c.k < 0 || c.l < 0 || c.k >= n_transmons || c.l >= n_transmons || c.k == c.l) {
      throw ValidationError("coupling pair (" + std::to_string(c.k) + "," + std::to_string(c.l) +
                            ") must reference distinct valid transmons");
    }
    if (!std::isfinite(c.g)) throw ValidationError("coupling g must be finite");
    if (!pairs.insert({std::min(c.k, c.l), std::max(c.k, c.l)}).second) {
      throw ValidationError("duplicate coupling pair (" + std::to_string(c.k) + "," +
                            std::to_string(c.l) + ")");
    }
  }
}

std::size_t TransmonDevice::dimension() const {
  std::size_t dim = 1;
  for (int k = 0; k < n_transmons; ++k) dim *= static_cast<std::size_t>(levels);
  return dim;
}

std::size_t TransmonDevice::fock_index(const std::vector<int>& lv) const {
  if (static_cast<int>(lv.size()) != n_transmons) throw DimensionError("level list length mismatch");
  std::size_t index = 0;
  for (int k = 0; k < n_transmons; ++k) {
    if (lv[k] < 0 || lv[k] >= levels) throw ValidationError("Fock level out of range");
    index = index * static_cast<std::size_t>(levels) + static_cast<std::size_t>(lv[k]);
  }
  return index;
}

TransmonDevice TransmonDevice::table_one(int n, int levels) {
  if (n < 1 || n > 4) throw ValidationError("reference device has 1 to 4 transmons");
  TransmonDevice d;
  d.n_transmons = n;
  d.levels = levels;
  d.omega.assign(kTableOmega, kTableOmega + n);
  d.delta.assign(kTableDelta, kTableDelta + n);
  if (n == 2) {
    d.couplings.push_back({0, 1, kTableG[0]});
  } else if (n == 4) {
    for (int k = 0; k < 4; ++k) d.couplings.push_back({k, (k + 1) % 4, kTableG[k]});
  } else if (n == 3) {
    // Ring closure for three transmons reuses the 4-1 coupling value.
    d.couplings = {{0, 1, kTableG[0]}, {1, 2, kTableG[1]}, {2, 0, kTableG[3]}};
  }
  d.validate();
  return d;
}

TransmonDevice parse_device(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed device JSON: ") + e.what());
  }
  TransmonDevice d;
  try {
    d.n_transmons = doc.at("n_transmons").get<int>();
    d.levels = doc.value("levels", 3);
    d.omega = doc.at("omega").get<std::vector<double>>();
    d.delta = doc.at("delta").get<std::vector<double>>();
    if (doc.contains("couplings")) {
      for (const auto& c : doc["couplings"]) {
        const auto pair = c.at("pair").get<std::vector<int>>();
        if (pair.size() != 2) throw ParseError("coupling pair must have two entries");
        d.couplings.push_back({pair[0], pair[1], c.at("g").get<double>()});
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("device document: ") + e.what());
  }
  d.validate();
  return d;
}

TransmonDevice load_device(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open device file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_device(buffer.str());
}

nlohmann::json to_json(const TransmonDevice& d) {
  json couplings = json::array();
  for (const auto& c : d.couplings) couplings.push_back({{"pair", {c.k, c.l}}, {"g", c.g}});
  return {{"n_transmons", d.n_transmons}, {"levels", d.levels}, {"omega", d.omega},
          {"delta", d.delta}, {"couplings", couplings}};
}

Eigen::MatrixXd single_mode_lowering(int levels) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd lowering_operator(const TransmonDevice& device, int k) {
  if (k < 0 || k >= device.n_transmons) {
    throw ValidationError("transmon index " + std::to_string(k) + " out of range");
  }
  const auto dim = static_cast<Eigen::Index>(device.dimension());
  const auto stride = static_cast<Eigen::Index>(stride_of(device, k));
  const int m = device.levels;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const int n = static_cast<int>((s / stride) % m);
    if (n > 0) a(s - stride, s) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

Eigen::VectorXd excitation_numbers(const TransmonDevice& device) {
  const auto dim = static_cast<Eigen::Index>(device.dimension());
  Eigen::VectorXd n = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    auto rest = static_cast<std::size_t>(s);
    for (int k = 0; k < device.n_transmons; ++k) {
      n[s] += static_cast<double>(rest % static_cast<std::size_t>(device.levels));
      rest /= static_cast<std::size_t>(device.levels);
    }
  }
  return n;
}

Eigen::MatrixXcd build_static_hamiltonian(const TransmonDevice& device, std::size_t budget) {
  device.validate();
  const std::size_t dim = device.dimension();
  if (dim > budget) {
    throw ValidationError("device dimension " + std::to_string(dim) + " exceeds budget " +
                          std::to_string(budget));
  }
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  std::vector<Eigen::MatrixXcd> lower;
  lower.reserve(device.n_transmons);
  for (int k = 0; k < device.n_transmons; ++k) lower.push_back(lowering_operator(device, k));

  const int m = device.levels;
  for (int k = 0; k < device.n_transmons; ++k) {
    const auto stride = static_cast<Eigen::Index>(stride_of(device, k));
    for (Eigen::Index s = 0; s < d; ++s) {
      const double n = static_cast<double>((s / stride) % m);
      // a^+ a^+ a a = n (n - 1)
      h(s, s) += device.omega[k] * n - 0.5 * device.delta[k] * n * (n - 1.0);
    }
  }
  for (const auto& c : device.couplings) {
    const Eigen::MatrixXcd hop = lower[c.k].adjoint() * lower[c.l];
    h += c.g * (hop + hop.adjoint());
  }
  return h;
}

StaticSpectrum eigendecompose_static(const TransmonDevice& device, std::size_t budget) {
  const Eigen::MatrixXcd h = build_static_hamiltonian(device, budget);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("static Hamiltonian diagonalization failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace pulsevqe
