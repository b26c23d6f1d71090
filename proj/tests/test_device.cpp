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

#include <gtest/gtest.h>

#include <cmath>

#include "pulsevqe/device.hpp"
#include "pulsevqe/error.hpp"
#include "support.hpp"

using namespace pulsevqe;
using pulsevqe::testing_support::data_path;

namespace {

TransmonDevice single(int levels, double omega, double delta) {
  TransmonDevice d;
  d.n_transmons = 1;
  d.levels = levels;
  d.omega = {omega};
  d.delta = {delta};
  return d;
}

}  // namespace

TEST(Device, TwoLevelAnharmonicityVanishes) {
  const auto h = build_static_hamiltonian(single(2, 5.0, 0.3));
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(2, 2);
  expect(1, 1) = 5.0;
  EXPECT_LT((h - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Device, ThreeLevelShift) {
  const auto h = build_static_hamiltonian(single(3, 5.0, 0.3));
  EXPECT_NEAR(h(0, 0).real(), 0.0, 1e-15);
  EXPECT_NEAR(h(1, 1).real(), 5.0, 1e-15);
  EXPECT_NEAR(h(2, 2).real(), 9.7, 1e-14);
  const auto sp = eigendecompose_static(single(3, 5.0, 0.3));
  EXPECT_NEAR(sp.energies(0), 0.0, 1e-14);
  EXPECT_NEAR(sp.energies(1), 5.0, 1e-14);
  EXPECT_NEAR(sp.energies(2), 9.7, 1e-14);
  EXPECT_LT((sp.basis_change.cwiseAbs() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Device, TableOneCouplingElement) {
  const auto d = load_device(data_path("devices/device_tableI_2q.json"));
  const auto h = build_static_hamiltonian(d);
  const auto i10 = static_cast<Eigen::Index>(d.fock_index({1, 0}));
  const auto i01 = static_cast<Eigen::Index>(d.fock_index({0, 1}));
  EXPECT_NEAR(h(i10, i01).real(), 0.01831, 1e-15);
  EXPECT_NEAR(h(i10, i01).imag(), 0.0, 1e-15);
}

TEST(Device, TableOneFileMatchesBuiltIn) {
  const auto file = load_device(data_path("devices/device_tableI.json"));
  const auto built = TransmonDevice::table_one(4);
  EXPECT_EQ(file.omega, built.omega);
  EXPECT_EQ(file.delta, built.delta);
  ASSERT_EQ(file.couplings.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(file.couplings[i].g, built.couplings[i].g);
  EXPECT_DOUBLE_EQ(built.omega[2], 4.9400);
  EXPECT_DOUBLE_EQ(built.delta[3], 0.2616);
  EXPECT_DOUBLE_EQ(built.couplings[3].g, 0.02031);
  EXPECT_EQ(built.couplings[3].k, 3);
  EXPECT_EQ(built.couplings[3].l, 0);
}

TEST(Device, SingleExcitationAvoidedCrossing) {
  // Exact 2x2 block [[w1, g], [g, w2]] inside the one-excitation sector.
  const auto sp = eigendecompose_static(TransmonDevice::table_one(2));
  EXPECT_NEAR(sp.energies(2) - sp.energies(1), 0.0445097112998953, 1e-12);
  EXPECT_NEAR(0.5 * (sp.energies(2) + sp.energies(1)), 4.82065, 1e-12);
}

TEST(Device, LoweringOperator) {
  const auto a = lowering_operator(single(3, 5.0, 0.3), 0);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(3, 3);
  expect(0, 1) = 1.0;
  expect(1, 2) = std::sqrt(2.0);
  EXPECT_LT((a - expect).cwiseAbs().maxCoeff(), 1e-15);

  TransmonDevice two = TransmonDevice::table_one(2, 2);
  const auto a1 = lowering_operator(two, 1);
  Eigen::MatrixXcd a2 = Eigen::MatrixXcd::Zero(2, 2);
  a2(0, 1) = 1.0;
  Eigen::MatrixXcd kron = Eigen::MatrixXcd::Zero(4, 4);
  kron.block(0, 0, 2, 2) = a2;
  kron.block(2, 2, 2, 2) = a2;
  EXPECT_LT((a1 - kron).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(lowering_operator(two, 2), Error);
  EXPECT_THROW(lowering_operator(two, -1), Error);
}

TEST(Device, TruncatedCommutator) {
  const auto d = TransmonDevice::table_one(2, 4);
  for (int k = 0; k < 2; ++k) {
    const auto a = lowering_operator(d, k);
    const Eigen::MatrixXcd c = a * a.adjoint() - a.adjoint() * a;
    for (std::size_t i = 0; i < d.dimension(); ++i) {
      std::vector<int> lv{static_cast<int>(i) / 4, static_cast<int>(i) % 4};
      if (lv[static_cast<std::size_t>(k)] >= d.levels - 1) continue;
      for (std::size_t j = 0; j < d.dimension(); ++j) {
        const double expect = i == j ? 1.0 : 0.0;
        EXPECT_NEAR(std::abs(c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - expect), 0.0, 1e-14);
      }
    }
  }
}

TEST(Device, ValidationErrors) {
  TransmonDevice d = TransmonDevice::table_one(2);
  d.omega[0] = -1.0;
  EXPECT_THROW(d.validate(), ValidationError);
  d = TransmonDevice::table_one(2);
  d.couplings.push_back({1, 0, 0.01});
  EXPECT_THROW(d.validate(), ValidationError);
  d = TransmonDevice::table_one(2);
  d.couplings = {{0, 0, 0.01}};
  EXPECT_THROW(d.validate(), ValidationError);
  d = TransmonDevice::table_one(2);
  d.couplings = {{0, 2, 0.01}};
  EXPECT_THROW(d.validate(), ValidationError);
  d = TransmonDevice::table_one(2);
  d.levels = 1;
  EXPECT_THROW(d.validate(), ValidationError);
  EXPECT_THROW(parse_device(R"({"n_transmons": 2, "omega": [1.0]})"), Error);
  EXPECT_THROW(parse_device("{"), ParseError);
}

TEST(Device, DimensionBudget) {
  EXPECT_THROW(build_static_hamiltonian(TransmonDevice::table_one(4, 3), 80), Error);
  EXPECT_NO_THROW(build_static_hamiltonian(TransmonDevice::table_one(4, 3), 81));
}

TEST(DeviceProperty, HermitianAndNumberConserving) {
  for (int n = 1; n <= 4; ++n) {
    const auto d = TransmonDevice::table_one(n);
    const auto h = build_static_hamiltonian(d);
    EXPECT_LT((h - h.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::VectorXd num = excitation_numbers(d);
    const Eigen::MatrixXcd commutator = h * num.asDiagonal() - num.asDiagonal() * h;
    EXPECT_LT(commutator.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DeviceProperty, SpectrumReconstruction) {
  const auto d = TransmonDevice::table_one(4);
  const auto h = build_static_hamiltonian(d);
  const auto sp = eigendecompose_static(d);
  const Eigen::MatrixXcd& v = sp.basis_change;
  EXPECT_LT((v.adjoint() * v - Eigen::MatrixXcd::Identity(v.rows(), v.cols())).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((v * sp.energies.asDiagonal() * v.adjoint() - h).cwiseAbs().maxCoeff(), 1e-10);
  for (Eigen::Index i = 1; i < sp.energies.size(); ++i) EXPECT_LE(sp.energies(i - 1), sp.energies(i));
}

TEST(DeviceProperty, UncoupledEnergiesAreSums) {
  TransmonDevice d = TransmonDevice::table_one(2);
  d.couplings.clear();
  const auto sp = eigendecompose_static(d);
  std::vector<double> sums;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      auto e = [&](int k, int n) { return d.omega[k] * n - 0.5 * d.delta[k] * n * (n - 1); };
      sums.push_back(e(0, i) + e(1, j));
    }
  }
  std::sort(sums.begin(), sums.end());
  for (std::size_t i = 0; i < sums.size(); ++i) EXPECT_NEAR(sp.energies(static_cast<Eigen::Index>(i)), sums[i], 1e-12);
}

TEST(DeviceProperty, WeakCouplingBasisNearIdentity) {
  TransmonDevice d = TransmonDevice::table_one(2);
  d.couplings[0].g = 1e-9;
  const auto sp = eigendecompose_static(d);
  const Eigen::MatrixXd mag = sp.basis_change.cwiseAbs();
  for (Eigen::Index c = 0; c < mag.cols(); ++c) EXPECT_NEAR(mag.col(c).maxCoeff(), 1.0, 1e-6);
}
