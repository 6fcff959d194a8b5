// Copyright 2026 The pathint Authors
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

#ifndef PATHINT_MODELS_LQ_HPP_
#define PATHINT_MODELS_LQ_HPP_

#include <vector>

#include "pathint/core.hpp"

namespace pathint {

/// Scalar system dx = u dt + sigma dW with cost 1/2 int (q x^2 + r u^2) dt + 1/2 p x_N^2.
struct LqParams {
  double state_weight = 1.0;
  double control_weight = 1.0;
  double terminal_weight = 0.0;
  double noise_scale = 1.0;

  void validate() const;
};

DynamicsModel make_lq_model(const LqParams& p);
CostModel make_lq_cost(const LqParams& p, ControlCostForm form = ControlCostForm::perturbed);

/// Discrete Riccati solution of the Euler-discretized problem x' = x + u dt.
struct LqOracle {
  double dt = 0.0;
  /// u_i = gains[i] * x, i = 0..N-1.
  std::vector<double> gains;
  /// V_i(x) = 1/2 value_coeffs[i] x^2 + value_offsets[i], i = 0..N.
  std::vector<double> value_coeffs;
  std::vector<double> value_offsets;

  int horizon() const { return static_cast<int>(gains.size()); }
  double control(int i, double x) const { return gains.at(static_cast<std::size_t>(i)) * x; }
  double optimal_cost(double x, int i = 0) const {
    const auto j = static_cast<std::size_t>(i);
    return 0.5 * value_coeffs.at(j) * x * x + value_offsets.at(j);
  }
};

/// `noise_scale` only affects the value offsets (the certainty-equivalent gains do not
/// depend on it).
LqOracle lq_analytic_oracle(int horizon, double dt, double state_weight, double control_weight,
                            double terminal_weight = 0.0, double noise_scale = 0.0);

/// Fixed point of the recursion: value coefficient and gain.
double lq_stationary_value(double dt, double state_weight, double control_weight);
double lq_stationary_gain(double dt, double state_weight, double control_weight);

/// Noise-free cost of u = gain * x from x0 over `horizon` steps.
double lq_closed_loop_cost(const LqParams& p, double gain, double x0, int horizon, double dt);

}  // namespace pathint

#endif  // PATHINT_MODELS_LQ_HPP_
