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

#include <functional>
#include <string>
#include <vector>

namespace pulsevqe {

/// Returns f(x); when `grad` is non-null it must also be filled with df/dx.
using ValueGradientFn = std::function<double(const std::vector<double>& x, std::vector<double>* grad)>;

struct BoxLbfgsConfig {
  int max_iters = 1000;
  double grad_tol = 1e-9;    // infinity norm of the projected gradient
  double energy_tol = 1e-10; // relative decrease between iterations
  int history = 10;
  int max_line_search = 40;
  double armijo = 1e-4;
};

struct BoxLbfgsResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  int n_value = 0;
  int n_grad = 0;
  bool converged = false;
  std::string reason;
  std::vector<double> trace;  // accepted f per iteration, starting with f(x0)
};

/// Limited-memory quasi-Newton minimization on the box [lower, upper].
///
/// Variables pinned at a bound with the gradient pointing outward are frozen
/// for the iteration; the two-loop recursion acts on the remaining ones and
/// the step is a backtracking search along the projected path
/// P(x + alpha d). Accepted iterates never increase f.
BoxLbfgsResult minimize_box(const ValueGradientFn& fn, std::vector<double> x0,
                            const std::vector<double>& lower, const std::vector<double>& upper,
                            const BoxLbfgsConfig& config = {});

}  // namespace pulsevqe
