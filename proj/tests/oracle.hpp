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

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/numeric/odeint.hpp>
#include <Eigen/Dense>

namespace pulsevqe::testing_support {

/// Lab-frame Schrodinger equation of one driven transmon with constant
/// amplitude, integrated by adaptive Dormand-Prince and mapped to the
/// interaction frame. Matrices are built here, not taken from the library.
inline Eigen::VectorXcd rabi_ode(int levels, double omega, double delta, double amp, double nu, double total_time,
                                 const Eigen::VectorXcd& psi0, double tol = 1e-13) {
  using namespace boost::numeric::odeint;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> diag(static_cast<std::size_t>(levels));
  for (int n = 0; n < levels; ++n) diag[static_cast<std::size_t>(n)] = omega * n - 0.5 * delta * n * (n - 1);

  using Vec = std::vector<double>;  // re/im interleaved
  auto rhs = [&](const Vec& x, Vec& dx, double t) {
    // i dpsi/dt = 2pi H psi, H = diag + amp (e^{i 2pi nu t} a + e^{-i 2pi nu t} a^+)
    const std::complex<double> e = std::polar(1.0, two_pi * nu * t);
    for (int n = 0; n < levels; ++n) {
      std::complex<double> hpsi = diag[static_cast<std::size_t>(n)] *
                                  std::complex<double>(x[2 * static_cast<std::size_t>(n)], x[2 * static_cast<std::size_t>(n) + 1]);
      if (n + 1 < levels) {  // a|n+1> = sqrt(n+1)|n>
        const auto k = static_cast<std::size_t>(n + 1);
        hpsi += amp * e * std::sqrt(static_cast<double>(n + 1)) * std::complex<double>(x[2 * k], x[2 * k + 1]);
      }
      if (n > 0) {  // a^+|n-1> = sqrt(n)|n>
        const auto k = static_cast<std::size_t>(n - 1);
        hpsi += amp * std::conj(e) * std::sqrt(static_cast<double>(n)) * std::complex<double>(x[2 * k], x[2 * k + 1]);
      }
      const std::complex<double> d = std::complex<double>(0.0, -two_pi) * hpsi;
      dx[2 * static_cast<std::size_t>(n)] = d.real();
      dx[2 * static_cast<std::size_t>(n) + 1] = d.imag();
    }
  };
  Vec x(2 * static_cast<std::size_t>(levels));
  for (int n = 0; n < levels; ++n) {
    x[2 * static_cast<std::size_t>(n)] = psi0(n).real();
    x[2 * static_cast<std::size_t>(n) + 1] = psi0(n).imag();
  }
  integrate_adaptive(make_controlled(tol, tol, runge_kutta_dopri5<Vec>()), rhs, x, 0.0, total_time, 1e-4);
  Eigen::VectorXcd out(levels);
  for (int n = 0; n < levels; ++n) {
    // interaction frame: psi_I = exp(+i 2pi H_D T) psi_lab
    out(n) = std::polar(1.0, two_pi * diag[static_cast<std::size_t>(n)] * total_time) *
             std::complex<double>(x[2 * static_cast<std::size_t>(n)], x[2 * static_cast<std::size_t>(n) + 1]);
  }
  return out;
}

inline double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

}  // namespace pulsevqe::testing_support
