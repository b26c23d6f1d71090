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

#include "pulsevqe/lbfgsb.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "pulsevqe/error.hpp"

namespace pulsevqe {

namespace {

struct Pair {
  std::vector<double> s;
  std::vector<double> y;
  double rho = 0.0;
};

double masked_dot(const std::vector<double>& a, const std::vector<double>& b,
                  const std::vector<char>& free) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (free[i]) acc += a[i] * b[i];
  }
  return acc;
}

}  // namespace

BoxLbfgsResult minimize_box(const ValueGradientFn& fn, std::vector<double> x,
                            const std::vector<double>& lower, const std::vector<double>& upper,
                            const BoxLbfgsConfig& config) {
  const std::size_t n = x.size();
  if (lower.size() != n || upper.size() != n) throw DimensionError("bounds length mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lower[i] <= upper[i])) throw ValidationError("lower bound exceeds upper bound");
    x[i] = std::clamp(x[i], lower[i], upper[i]);
  }

  BoxLbfgsResult result;
  std::vector<double> g(n, 0.0);
  double f = fn(x, &g);
  ++result.n_value;
  ++result.n_grad;
  result.trace.push_back(f);

  std::deque<Pair> memory;
  std::vector<char> free(n, 1);
  std::vector<double> d(n), x_new(n), g_new(n), alpha(static_cast<std::size_t>(config.history));

  for (int iter = 0; iter < config.max_iters; ++iter) {
    double pg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pg = std::max(pg, std::abs(std::clamp(x[i] - g[i], lower[i], upper[i]) - x[i]));
      free[i] = !((x[i] <= lower[i] && g[i] > 0.0) || (x[i] >= upper[i] && g[i] < 0.0));
    }
    if (pg <= config.grad_tol) {
      result.converged = true;
      result.reason = "projected gradient below tolerance";
      break;
    }

    bool steepest = memory.empty();
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      // Search direction from the two-loop recursion on the free variables.
      std::vector<double> q(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) q[i] = free[i] ? g[i] : 0.0;
      if (!steepest) {
        for (std::size_t m = memory.size(); m-- > 0;) {
          alpha[m] = memory[m].rho * masked_dot(memory[m].s, q, free);
          for (std::size_t i = 0; i < n; ++i) {
            if (free[i]) q[i] -= alpha[m] * memory[m].y[i];
          }
        }
        const auto& last = memory.back();
        const double yy = masked_dot(last.y, last.y, free);
        const double gamma = yy > 0.0 ? masked_dot(last.s, last.y, free) / yy : 1.0;
        for (auto& v : q) v *= gamma > 0.0 ? gamma : 1.0;
        for (std::size_t m = 0; m < memory.size(); ++m) {
          const double beta = memory[m].rho * masked_dot(memory[m].y, q, free);
          for (std::size_t i = 0; i < n; ++i) {
            if (free[i]) q[i] += memory[m].s[i] * (alpha[m] - beta);
          }
        }
      }
      double slope = 0.0;
      double dmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d[i] = free[i] ? -q[i] : 0.0;
        slope += d[i] * g[i];
        dmax = std::max(dmax, std::abs(d[i]));
      }
      if (!(slope < 0.0)) {
        if (steepest) break;
        memory.clear();
        steepest = true;
        continue;
      }
      // A steepest-descent step is scaled so its largest component is at most 0.1 box units.
      double step = steepest ? std::min(1.0, 0.1 / dmax) : 1.0;
      double f_new = f;
      for (int ls = 0; ls < config.max_line_search; ++ls) {
        double decrease = 0.0;
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
          x_new[i] = std::clamp(x[i] + step * d[i], lower[i], upper[i]);
          decrease += g[i] * (x_new[i] - x[i]);
          moved = moved || x_new[i] != x[i];
        }
        if (!moved) break;
        f_new = fn(x_new, nullptr);
        ++result.n_value;
        if (std::isfinite(f_new) && f_new <= f + config.armijo * decrease) {
          accepted = true;
          break;
        }
        // Safeguarded quadratic interpolation along the path.
        double next = 0.5 * step;
        const double curvature = f_new - f - decrease;
        if (std::isfinite(f_new) && curvature > 0.0) {
          next = std::clamp(-decrease * step / (2.0 * curvature), 0.1 * step, 0.5 * step);
        }
        step = next;
      }
      if (!accepted) {
        if (steepest) break;
        memory.clear();
        steepest = true;
        continue;
      }
      const double f_old = f;
      f = fn(x_new, &g_new);
      ++result.n_grad;
      ++result.n_value;
      (void)f_new;
      Pair pair;
      pair.s.resize(n);
      pair.y.resize(n);
      double sy = 0.0;
      double yy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        pair.s[i] = x_new[i] - x[i];
        pair.y[i] = g_new[i] - g[i];
        sy += pair.s[i] * pair.y[i];
        yy += pair.y[i] * pair.y[i];
      }
      if (sy > 1e-12 * yy && sy > 0.0) {
        pair.rho = 1.0 / sy;
        memory.push_back(std::move(pair));
        if (static_cast<int>(memory.size()) > config.history) memory.pop_front();
      }
      x = x_new;
      g = g_new;
      result.trace.push_back(f);
      result.iterations = iter + 1;
      if (f_old - f <= config.energy_tol * std::max({std::abs(f_old), std::abs(f), 1.0})) {
        result.converged = true;
        result.reason = "relative decrease below tolerance";
      }
    }
    if (!accepted) {
      result.reason = "line search failed";
      break;
    }
    if (result.converged) break;
  }
  if (result.reason.empty()) result.reason = "iteration limit reached";
  result.x = std::move(x);
  result.f = f;
  return result;
}

}  // namespace pulsevqe
