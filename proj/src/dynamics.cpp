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

#include "pulsevqe/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pulsevqe/error.hpp"

namespace pulsevqe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGridMergeTolerance = 1e-12;  // ns
constexpr int kMaxLevels = 16;
constexpr double kNominalTolerance = 1e-12;    // ns

}  // namespace

void EvolutionConfig::validate(double total_time) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (dt > total_time) throw ValidationError("dt must not exceed the pulse duration");
  if (snapshot_stride < 0) throw ValidationError("snapshot_stride must be >= 0");
}

State embed_reference(std::string_view bits, const TransmonDevice& device) {
  if (static_cast<int>(bits.size()) != device.n_transmons) {
    throw ValidationError("reference bitstring '" + std::string(bits) + "' must have " +
                          std::to_string(device.n_transmons) + " characters");
  }
  std::vector<int> lv;
  lv.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError("invalid reference bitstring '" + std::string(bits) + "'");
    lv.push_back(c - '0');
  }
  const auto dim = static_cast<Eigen::Index>(device.dimension());
  return State::Unit(dim, static_cast<Eigen::Index>(device.fock_index(lv)));
}

std::vector<Eigen::Index> computational_indices(const TransmonDevice& device) {
  const int n = device.n_transmons;
  std::vector<Eigen::Index> out(std::size_t{1} << n);
  for (std::size_t b = 0; b < out.size(); ++b) {
    std::size_t idx = 0;
    for (int k = 0; k < n; ++k) {
      idx = idx * static_cast<std::size_t>(device.levels) + ((b >> (n - 1 - k)) & 1U);
    }
    out[b] = static_cast<Eigen::Index>(idx);
  }
  return out;
}

double leakage(const State& state, const TransmonDevice& device) {
  if (static_cast<std::size_t>(state.size()) != device.dimension()) {
    throw DimensionError("state dimension does not match the device");
  }
  double inside = 0.0;
  for (auto idx : computational_indices(device)) inside += std::norm(state[idx]);
  return std::clamp(1.0 - inside, 0.0, 1.0);
}

Eigen::MatrixXcd drive_hamiltonian(const TransmonDevice& device, const PulseSet& set, double t) {
  if (set.size() != static_cast<std::size_t>(device.n_transmons)) {
    throw DimensionError("pulse count does not match n_transmons");
  }
  const auto dim = static_cast<Eigen::Index>(device.dimension());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < device.n_transmons; ++k) {
    const double omega = set.amplitude(static_cast<std::size_t>(k), t);
    if (omega == 0.0) continue;
    const Complex phase = std::polar(1.0, kTwoPi * set.frequency(static_cast<std::size_t>(k)) * t);
    const Eigen::MatrixXcd a = lowering_operator(device, k);
    h += omega * (phase * a + std::conj(phase) * a.adjoint());
  }
  return h;
}

std::vector<double> time_grid(const PulseSet& set, double dt) {
  const double T = set.total_time;
  const auto full = static_cast<long long>(std::floor(T / dt + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(full) + 2);
  for (long long k = 0; k <= full; ++k) grid.push_back(static_cast<double>(k) * dt);
  if (T - grid.back() > kGridMergeTolerance) {
    grid.push_back(T);
  } else {
    grid.back() = T;
  }
  for (double t : set.breakpoints()) {
    if (t > 0.0 && t < T) grid.push_back(t);
  }
  std::sort(grid.begin(), grid.end());
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) {
    if (out.empty() || t - out.back() > kGridMergeTolerance) out.push_back(t);
  }
  if (out.back() != T) out.back() = T;
  return out;
}

Propagator::Propagator(const TransmonDevice& device, double nominal_dt, std::size_t budget)
    : device_(device), nominal_dt_(nominal_dt) {
  if (device_.levels > kMaxLevels) throw ValidationError("at most 16 levels per transmon supported");
  h_static_ = build_static_hamiltonian(device_, budget);
  dim_ = h_static_.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h_static_);
  if (solver.info() != Eigen::Success) throw NumericalError("static Hamiltonian diagonalization failed");
  spectrum_ = {solver.eigenvalues(), solver.eigenvectors()};

  lowering_ = single_mode_lowering(device_.levels);
  const Eigen::MatrixXd x0 = lowering_ + lowering_.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mode(x0);
  mode_vectors_ = mode.eigenvectors();
  mode_values_ = mode.eigenvalues();

  strides_.assign(static_cast<std::size_t>(device_.n_transmons), 1);
  for (int k = device_.n_transmons - 2; k >= 0; --k) {
    strides_[static_cast<std::size_t>(k)] = strides_[static_cast<std::size_t>(k) + 1] * device_.levels;
  }

  const auto& v = spectrum_.basis_change;
  const Eigen::VectorXcd phases =
      (spectrum_.energies * (-kTwoPi * nominal_dt_)).unaryExpr([](double x) { return std::polar(1.0, x); });
  nominal_step_ = v * phases.asDiagonal() * v.adjoint();
  nominal_step_adjoint_ = nominal_step_.adjoint();
}

bool Propagator::is_nominal(double tau) const { return std::abs(tau - nominal_dt_) < kNominalTolerance; }

void Propagator::apply_static(const State& in, double tau, State& out) const {
  if (is_nominal(tau)) {
    out.noalias() = nominal_step_ * in;
  } else if (std::abs(tau + nominal_dt_) < kNominalTolerance) {
    out.noalias() = nominal_step_adjoint_ * in;
  } else {
    const auto& v = spectrum_.basis_change;
    State tmp = v.adjoint() * in;
    for (Eigen::Index i = 0; i < tmp.size(); ++i) {
      tmp[i] *= std::polar(1.0, -kTwoPi * spectrum_.energies[i] * tau);
    }
    out.noalias() = v * tmp;
  }
}

State Propagator::rotate_static(const State& v, double tau) const {
  State out(v.size());
  apply_static(v, tau, out);
  return out;
}

Eigen::MatrixXcd Propagator::local_unitary(double theta, double phase) const {
  // exp(-i theta X(phase)) with X(phase) = e^{i phase} a + e^{-i phase} a^+
  //   = R exp(-i theta X0) R^+,  R = diag(e^{-i phase n}).
  const int m = device_.levels;
  Complex rot[kMaxLevels];
  for (int c = 0; c < m; ++c) rot[c] = std::polar(1.0, -theta * mode_values_[c]);
  // shift[d + m - 1] = e^{i phase d}
  Complex shift[31];
  const Complex step = std::polar(1.0, phase);
  shift[m - 1] = 1.0;
  for (int d = 1; d < m; ++d) {
    shift[m - 1 + d] = shift[m - 2 + d] * step;
    shift[m - 1 - d] = std::conj(shift[m - 1 + d]);
  }
  Eigen::MatrixXcd u(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      Complex acc{0.0, 0.0};
      for (int c = 0; c < m; ++c) acc += mode_vectors_(a, c) * mode_vectors_(b, c) * rot[c];
      u(a, b) = acc * shift[m - 1 + b - a];
    }
  }
  return u;
}

void Propagator::apply_local(const Eigen::MatrixXcd& u, int k, State& v) const {
  const int m = device_.levels;
  const Eigen::Index stride = strides_[static_cast<std::size_t>(k)];
  const Eigen::Index block = stride * m;
  Complex in[kMaxLevels];
  Complex out[kMaxLevels];
  for (Eigen::Index base = 0; base < dim_; base += block) {
    for (Eigen::Index inner = 0; inner < stride; ++inner) {
      const Eigen::Index start = base + inner;
      for (int a = 0; a < m; ++a) in[a] = v[start + a * stride];
      for (int a = 0; a < m; ++a) {
        Complex acc{0.0, 0.0};
        for (int b = 0; b < m; ++b) acc += u(a, b) * in[b];
        out[a] = acc;
      }
      for (int a = 0; a < m; ++a) v[start + a * stride] = out[a];
    }
  }
}

EvolutionResult Propagator::evolve(const PulseSet& set, const State& psi0,
                                   const EvolutionConfig& config, const EnergyProbe& probe) const {
  config.validate(set.total_time);
  if (set.size() != static_cast<std::size_t>(device_.n_transmons)) {
    throw DimensionError("pulse count does not match n_transmons");
  }
  if (psi0.size() != dim_) throw DimensionError("initial state dimension does not match the device");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw NumericalError("initial state must be normalized");
  return config.frame == Frame::interaction ? evolve_interaction(set, psi0, config, probe, nullptr)
                                            : evolve_lab(set, psi0, config, probe);
}

State Propagator::evolve_recorded(const PulseSet& set, const State& psi0, double dt,
                                  ForwardTape& tape) const {
  EvolutionConfig config;
  config.dt = dt;
  config.validate(set.total_time);
  if (set.size() != static_cast<std::size_t>(device_.n_transmons)) {
    throw DimensionError("pulse count does not match n_transmons");
  }
  return evolve_interaction(set, psi0, config, {}, &tape).final_state;
}

EvolutionResult Propagator::evolve_interaction(const PulseSet& set, const State& psi0,
                                               const EvolutionConfig& config, const EnergyProbe& probe,
                                               ForwardTape* tape) const {
  const std::vector<double> grid = time_grid(set, config.dt);
  const std::size_t steps = grid.size() - 1;
  const int n = device_.n_transmons;
  const double snap_every = config.snapshot_stride > 0 ? config.dt * config.snapshot_stride : 0.0;

  EvolutionResult result;
  auto record = [&](double t, const State& psi) {
    result.trajectory.push_back({t, probe ? probe(psi) : 0.0, leakage(psi, device_)});
  };
  double next_snapshot = 0.0;
  if (snap_every > 0.0) {
    record(0.0, psi0);
    next_snapshot = snap_every;
  }

  if (tape) {
    tape->mid.resize(steps);
    tape->width.resize(steps);
    tape->chi.resize(steps);
    tape->drive.resize(steps * static_cast<std::size_t>(n));
  }

  // chi = exp(-i 2pi H_D tau) psi. Without a tape, steps with no drive are
  // skipped, so a zero pulse returns psi0 unchanged.
  State chi = psi0;
  State scratch(dim_);
  double tau = 0.0;
  double drift = 0.0;
  auto current = [&]() { return tau == 0.0 ? chi : rotate_static(chi, -tau); };
  for (std::size_t s = 1; s <= steps; ++s) {
    const double h = grid[s] - grid[s - 1];
    const double mid = 0.5 * (grid[s] + grid[s - 1]);
    bool driven = tape != nullptr;
    for (int k = 0; k < n && !driven; ++k) driven = set.amplitude(static_cast<std::size_t>(k), mid) != 0.0;
    if (driven) {
      apply_static(chi, mid - tau, scratch);
      chi.swap(scratch);
      tau = mid;
      for (int k = 0; k < n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const double omega = set.amplitude(ku, mid);
        Eigen::MatrixXcd u = local_unitary(kTwoPi * h * omega, kTwoPi * set.frequency(ku) * mid);
        apply_local(u, k, chi);
        if (tape) tape->drive[(s - 1) * static_cast<std::size_t>(n) + ku] = std::move(u);
      }
      drift = std::max(drift, std::abs(chi.norm() - 1.0));
    }
    if (tape) {
      tape->mid[s - 1] = mid;
      tape->width[s - 1] = h;
      tape->chi[s - 1] = chi;
    }
    if (snap_every > 0.0 && grid[s] >= next_snapshot - 1e-9) {
      record(grid[s], current());
      next_snapshot += snap_every;
    }
  }
  result.final_state = current();
  result.norm_drift = std::max(drift, std::abs(result.final_state.norm() - 1.0));
  if (result.norm_drift > kMaxNormDrift) {
    throw NumericalError("norm drift " + std::to_string(result.norm_drift) + " exceeds tolerance");
  }
  return result;
}

EvolutionResult Propagator::evolve_lab(const PulseSet& set, const State& psi0,
                                       const EvolutionConfig& config, const EnergyProbe& probe) const {
  const std::vector<double> grid = time_grid(set, config.dt);
  const double snap_every = config.snapshot_stride > 0 ? config.dt * config.snapshot_stride : 0.0;
  EvolutionResult result;
  auto record = [&](double t, const State& psi) {
    result.trajectory.push_back({t, probe ? probe(psi) : 0.0, leakage(psi, device_)});
  };
  double next_snapshot = 0.0;
  if (snap_every > 0.0) {
    record(0.0, psi0);
    next_snapshot = snap_every;
  }
  State psi = psi0;
  double drift = 0.0;
  for (std::size_t s = 1; s < grid.size(); ++s) {
    const double h = grid[s] - grid[s - 1];
    const double mid = 0.5 * (grid[s] + grid[s - 1]);
    const Eigen::MatrixXcd total = h_static_ + drive_hamiltonian(device_, set, mid);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(total);
    const Eigen::VectorXcd phases =
        (solver.eigenvalues() * (-kTwoPi * h)).unaryExpr([](double x) { return std::polar(1.0, x); });
    psi = solver.eigenvectors() * (phases.asDiagonal() * (solver.eigenvectors().adjoint() * psi));
    drift = std::max(drift, std::abs(psi.norm() - 1.0));
    if (snap_every > 0.0 && grid[s] >= next_snapshot - 1e-9) {
      record(grid[s], rotate_static(psi, -grid[s]));
      next_snapshot += snap_every;
    }
  }
  result.final_state = rotate_static(psi, -set.total_time);
  result.norm_drift = std::max(drift, std::abs(result.final_state.norm() - 1.0));
  if (result.norm_drift > kMaxNormDrift) {
    throw NumericalError("norm drift " + std::to_string(result.norm_drift) + " exceeds tolerance");
  }
  return result;
}

Eigen::MatrixXd Propagator::adjoint(const PulseSet& set, const ForwardTape& tape, const State& g) const {
  const int n = device_.n_transmons;
  const std::size_t steps = tape.mid.size();
  const int m = device_.levels;
  Eigen::MatrixXd sens = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(steps));
  if (steps == 0) return sens;

  State lambda = rotate_static(g, tape.mid.back());
  State work(dim_);
  State scratch(dim_);
  for (std::size_t s = steps; s-- > 0;) {
    const double mid = tape.mid[s];
    const double h = tape.width[s];
    const State& chi = tape.chi[s];
    for (int k = 0; k < n; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const Complex phase = std::polar(1.0, kTwoPi * set.frequency(ku) * mid);
      Eigen::MatrixXcd x(m, m);
      x = phase * lowering_.cast<Complex>() + std::conj(phase) * lowering_.transpose().cast<Complex>();
      work = chi;
      apply_local(x, k, work);
      // dchi/dOmega_k = -i 2pi h X_k chi, so dE = 2 Re <lambda| -i 2pi h X chi>.
      sens(k, static_cast<Eigen::Index>(s)) = 2.0 * kTwoPi * h * lambda.dot(work).imag();
    }
    for (int k = 0; k < n; ++k) {
      apply_local(tape.drive[s * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)].adjoint(), k,
                  lambda);
    }
    const double prev_mid = s > 0 ? tape.mid[s - 1] : 0.0;
    apply_static(lambda, -(mid - prev_mid), scratch);
    lambda.swap(scratch);
  }
  return sens;
}

EvolutionResult evolve(const TransmonDevice& device, const PulseSet& set, const State& psi0,
                       const EvolutionConfig& config, const EnergyProbe& probe) {
  return Propagator(device, config.dt).evolve(set, psi0, config, probe);
}

}  // namespace pulsevqe
