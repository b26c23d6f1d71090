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
#include <random>

#include "oracle.hpp"
#include "pulsevqe/dynamics.hpp"
#include "pulsevqe/error.hpp"
#include "pulsevqe/objective.hpp"
#include "support.hpp"

using namespace pulsevqe;
using pulsevqe::testing_support::data_path;
using pulsevqe::testing_support::fidelity;
using pulsevqe::testing_support::fixture;
using pulsevqe::testing_support::rabi_ode;
using pulsevqe::testing_support::random_state;

namespace {

TransmonDevice single(int levels) {
  TransmonDevice d;
  d.n_transmons = 1;
  d.levels = levels;
  d.omega = {4.8080};
  d.delta = {0.3102};
  return d;
}

PulseSet constant_pulse(double amp, double freq, double T) {
  PulseSet s;
  s.total_time = T;
  s.square = {{{amp}, {}, freq}};
  return s;
}

PulseSet random_h2_pulse(std::mt19937_64& rng, double T = 9.0) {
  std::uniform_real_distribution<double> amp(-0.02, 0.02);
  std::uniform_real_distribution<double> df(-0.5, 0.5);
  std::uniform_real_distribution<double> sw(0.5, T - 0.5);
  PulseSet s;
  s.total_time = T;
  const double omega[] = {4.8080, 4.8333};
  for (int k = 0; k < 2; ++k) s.square.push_back({{amp(rng), amp(rng)}, {sw(rng)}, omega[k] + df(rng)});
  return s;
}

}  // namespace

TEST(Dynamics, EmbedReference) {
  const auto d = TransmonDevice::table_one(2);
  const State s = embed_reference("01", d);
  EXPECT_EQ(s.size(), 9);
  EXPECT_EQ(s(static_cast<Eigen::Index>(d.fock_index({0, 1}))), Complex(1.0));
  EXPECT_NEAR(s.norm(), 1.0, 0.0);
  const auto d4 = TransmonDevice::table_one(4);
  const State g = embed_reference("0000", d4);
  EXPECT_EQ(g(0), Complex(1.0));
  EXPECT_EQ(leakage(g, d4), 0.0);
  for (const char* bits : {"0101", "1111", "1000"}) EXPECT_EQ(leakage(embed_reference(bits, d4), d4), 0.0);
  EXPECT_THROW(embed_reference("012", d), Error);
  EXPECT_THROW(embed_reference("0a", d), Error);
}

TEST(Dynamics, Leakage) {
  const auto d = TransmonDevice::table_one(2);
  State s = State::Zero(9);
  s(static_cast<Eigen::Index>(d.fock_index({2, 0}))) = 1.0;
  EXPECT_NEAR(leakage(s, d), 1.0, 1e-15);
  std::mt19937_64 rng(1);
  State c = State::Zero(9);
  const State r = random_state(4, rng);
  const auto idx = computational_indices(d);
  for (int i = 0; i < 4; ++i) c(idx[static_cast<std::size_t>(i)]) = r(i);
  EXPECT_NEAR(leakage(c, d), 0.0, 1e-15);
}

TEST(Dynamics, DriveHamiltonian) {
  const auto d4 = TransmonDevice::table_one(4);
  PulseSet zero = PulseSet::zero_square(4, 10.0, d4.omega);
  EXPECT_EQ(drive_hamiltonian(d4, zero, 3.0).cwiseAbs().maxCoeff(), 0.0);

  TransmonDevice one = single(2);
  const auto h = drive_hamiltonian(one, constant_pulse(0.02, 4.8, 1.0), 0.0);
  EXPECT_NEAR(std::abs(h(0, 1) - 0.02), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(h(1, 0) - 0.02), 0.0, 1e-16);
  EXPECT_EQ(h(0, 0), Complex(0.0));

  std::mt19937_64 rng(2);
  PulseSet p;
  p.total_time = 10.0;
  for (int k = 0; k < 4; ++k) p.square.push_back({{0.01 * (k + 1) / 4.0, -0.015}, {3.0 + k}, d4.omega[k] + 0.1 * k});
  std::uniform_real_distribution<double> t(0.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const auto hc = drive_hamiltonian(d4, p, t(rng));
    EXPECT_LT((hc - hc.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Dynamics, TimeGridIncludesSwitchTimes) {
  PulseSet p;
  p.total_time = 0.05;
  p.square = {{{0.01, 0.02}, {0.023}, 4.8}};
  const auto grid = time_grid(p, 0.01);
  const std::vector<double> expect{0.0, 0.01, 0.02, 0.023, 0.03, 0.04, 0.05};
  ASSERT_EQ(grid.size(), expect.size());
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(grid[i], expect[i], 1e-15);
  p.total_time = 0.035;
  p.square[0].switch_times = {0.02};
  const auto g2 = time_grid(p, 0.01);
  EXPECT_EQ(g2.size(), 5u);
  EXPECT_NEAR(g2.back() - g2[g2.size() - 2], 0.005, 1e-15);
}

TEST(Dynamics, ConfigValidation) {
  EvolutionConfig c;
  c.dt = 0.0;
  EXPECT_THROW(c.validate(1.0), ValidationError);
  c.dt = 2.0;
  EXPECT_THROW(c.validate(1.0), ValidationError);
  c.dt = 0.01;
  c.snapshot_stride = -1;
  EXPECT_THROW(c.validate(1.0), ValidationError);
}

TEST(Dynamics, ZeroPulseIsExactIdentity) {
  const auto d = TransmonDevice::table_one(4);
  std::mt19937_64 rng(3);
  for (double T : {0.37, 5.0, 40.0}) {
    const State psi0 = random_state(81, rng);
    const auto r = evolve(d, PulseSet::zero_square(4, T, d.omega, 3), psi0, {});
    EXPECT_TRUE(r.final_state == psi0);
  }
}

TEST(Dynamics, SnapshotCount) {
  const auto d = TransmonDevice::table_one(2);
  EvolutionConfig c;
  c.snapshot_stride = 10;
  PulseSet p = PulseSet::zero_square(2, 9.0, d.omega, 2);
  const auto r = evolve(d, p, embed_reference("01", d), c, [](const State&) { return 1.5; });
  EXPECT_EQ(r.trajectory.size(), static_cast<std::size_t>(std::floor(9.0 / 0.1)) + 1);
  EXPECT_EQ(r.trajectory.front().t, 0.0);
  EXPECT_NEAR(r.trajectory.back().t, 9.0, 1e-12);
  for (const auto& s : r.trajectory) {
    EXPECT_EQ(s.energy, 1.5);
    EXPECT_EQ(s.leakage, 0.0);
  }
}

TEST(Dynamics, ResonantTwoLevelRabiMatchesOde) {
  const TransmonDevice d = single(2);
  State psi0 = State::Zero(2);
  psi0(0) = 1.0;
  for (double amp : {0.005, 0.013, 0.02}) {
    for (double T : {3.0, 11.7}) {
      const auto r = evolve(d, constant_pulse(amp, 4.8080, T), psi0, {});
      const auto ref = rabi_ode(2, 4.8080, 0.3102, amp, 4.8080, T, psi0);
      EXPECT_GT(fidelity(r.final_state, ref), 1.0 - 1e-10);
      // On resonance the two-level population is sin^2(2 pi amp T).
      EXPECT_NEAR(std::norm(r.final_state(1)), std::pow(std::sin(2.0 * std::numbers::pi * amp * T), 2), 1e-10);
    }
  }
}

TEST(Dynamics, ThreeLevelRabiMatchesOde) {
  const TransmonDevice d = single(3);
  State psi0 = State::Zero(3);
  psi0(0) = 1.0;
  for (double amp : {0.01, 0.04}) {
    for (double nu : {4.8080, 4.65}) {
      EvolutionConfig c;
      c.dt = 0.005;
      const auto r = evolve(d, constant_pulse(amp, nu, 7.3), psi0, c);
      const auto ref = rabi_ode(3, 4.8080, 0.3102, amp, nu, 7.3, psi0);
      EXPECT_GT(fidelity(r.final_state, ref), 1.0 - 1e-8) << amp << " " << nu;
    }
  }
}

TEST(Dynamics, FramesAgreeOnRandomPulses) {
  const auto d = TransmonDevice::table_one(2);
  const Propagator prop(d);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 3; ++i) {
    const PulseSet p = random_h2_pulse(rng);
    EvolutionConfig fine;
    fine.dt = 0.001;
    const State psi0 = embed_reference("01", d);
    const State a = prop.evolve(p, psi0, fine).final_state;
    fine.frame = Frame::lab;
    fine.dt = 0.0005;
    const State b = prop.evolve(p, psi0, fine).final_state;
    EXPECT_GT(fidelity(a, b), 1.0 - 1e-8);
  }
}

TEST(Dynamics, TrotterConvergence) {
  const auto d = TransmonDevice::table_one(2);
  std::mt19937_64 rng(5);
  const PulseSet p = random_h2_pulse(rng);
  EvolutionConfig c;
  const State psi0 = embed_reference("01", d);
  const State coarse = evolve(d, p, psi0, c).final_state;
  c.dt = 0.005;
  const State fine = evolve(d, p, psi0, c).final_state;
  c.dt = 0.0025;
  const State finer = evolve(d, p, psi0, c).final_state;
  const double e1 = (coarse - fine).norm();
  const double e2 = (fine - finer).norm();
  // Second order: halving dt quarters the step error.
  EXPECT_NEAR(e1 / e2, 4.0, 0.2);
}

TEST(Dynamics, ExcitationNumberConservedWithoutDrive) {
  const auto d = TransmonDevice::table_one(3);
  std::mt19937_64 rng(6);
  const State psi0 = random_state(27, rng);
  const Eigen::VectorXd n = excitation_numbers(d);
  EvolutionConfig c;
  c.frame = Frame::lab;
  const auto r = evolve(d, PulseSet::zero_square(3, 6.0, d.omega), psi0, c);
  const double before = (psi0.adjoint() * n.asDiagonal() * psi0)(0).real();
  const double after = (r.final_state.adjoint() * n.asDiagonal() * r.final_state)(0).real();
  EXPECT_NEAR(before, after, 1e-10);
}

TEST(Dynamics, MirroredPulseReversesResonantEvolution) {
  // With m = 2 and nu = omega the interaction-frame drive is amp(t) sigma_x per
  // transmon, so the sign-reversed, time-mirrored pulse undoes it.
  TransmonDevice d;
  d.n_transmons = 2;
  d.levels = 2;
  d.omega = {4.8080, 4.8333};
  d.delta = {0.3102, 0.2916};
  PulseSet fwd;
  fwd.total_time = 9.0;
  fwd.square = {{{0.01, -0.02, 0.005}, {2.0, 5.5}, 4.8080}, {{0.015, 0.003}, {4.0}, 4.8333}};
  PulseSet back = fwd;
  for (auto& p : back.square) {
    std::reverse(p.amps.begin(), p.amps.end());
    for (auto& a : p.amps) a = -a;
    std::reverse(p.switch_times.begin(), p.switch_times.end());
    for (auto& t : p.switch_times) t = fwd.total_time - t;
  }
  std::mt19937_64 rng(7);
  const State psi0 = random_state(4, rng);
  const State mid = evolve(d, fwd, psi0, {}).final_state;
  const State end = evolve(d, back, mid, {}).final_state;
  EXPECT_GT(fidelity(end, psi0), 1.0 - 1e-6);
}

TEST(DynamicsProperty, EvolutionIsUnitary) {
  const auto d = TransmonDevice::table_one(2);
  const Propagator prop(d);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 5; ++i) {
    const PulseSet p = random_h2_pulse(rng);
    const State a = random_state(9, rng);
    const State b = random_state(9, rng);
    const auto ra = prop.evolve(p, a, {});
    const auto rb = prop.evolve(p, b, {});
    EXPECT_LT(ra.norm_drift, 1e-8);
    EXPECT_NEAR(std::abs(ra.final_state.dot(rb.final_state) - a.dot(b)), 0.0, 1e-12);
  }
}

TEST(Dynamics, MismatchedPulseCountThrows) {
  const auto d = TransmonDevice::table_one(2);
  EXPECT_THROW(evolve(d, PulseSet::zero_square(3, 1.0, {4.8, 4.8, 4.8}), embed_reference("01", d), {}), Error);
}

TEST(Dynamics, GoldenPulseTrajectoryRisesThenConverges) {
  const auto h = load_hamiltonian(fixture("h2_sto3g_parity_r0.75.json"));
  const auto d = TransmonDevice::table_one(2);
  ObjectiveSpec spec{h, d, load_pulse_set(data_path("pulses/h2_r0.75_T9_2seg.json"))};
  const Objective obj(spec);
  EvolutionConfig c;
  c.snapshot_stride = 10;
  const auto r = obj.propagator().evolve(spec.pulse_template, obj.initial_state(), c,
                                          [&](const State& s) { return obj.state_energy(s); });
  const double exact = *obj.exact_energy();
  EXPECT_LT(r.trajectory.back().energy - exact, 1e-4);
  double peak = r.trajectory.front().energy;
  for (const auto& s : r.trajectory) peak = std::max(peak, s.energy);
  EXPECT_GT(peak, r.trajectory.front().energy + 1e-3);
}
