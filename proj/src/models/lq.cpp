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

#include "pathint/models/lq.hpp"

#include <cmath>

namespace pathint {

void LqParams::validate() const {
  if (!(state_weight >= 0.0) || !(terminal_weight >= 0.0)) {
    throw ConfigError("lq state and terminal weights must be >= 0");
  }
  if (!(control_weight > 0.0)) {
    throw ConfigError("lq.control_weight must be > 0");
  }
  if (!(noise_scale >= 0.0)) {
    throw ConfigError("lq.noise_scale must be >= 0");
  }
}

DynamicsModel make_lq_model(const LqParams& p) {
  p.validate();
  DynamicsModel model;
  model.state_dim = 1;
  model.control_dim = 1;
  model.drift = [](double, ConstVectorRef, VectorRef dxdt) { dxdt.setZero(); };
  model.input_matrix = [](double, ConstVectorRef, MatrixRef g) { g(0, 0) = 1.0; };
  model.diffusion_scale = Vector::Constant(1, p.noise_scale);
  return model;
}

CostModel make_lq_cost(const LqParams& p, ControlCostForm form) {
  p.validate();
  CostModel cost;
  cost.running_state_cost = [q = p.state_weight](double, ConstVectorRef x) { return 0.5 * q * x[0] * x[0]; };
  cost.terminal_cost = [pt = p.terminal_weight](ConstVectorRef x) { return 0.5 * pt * x[0] * x[0]; };
  cost.control_weight = Matrix::Constant(1, 1, p.control_weight);
  cost.control_cost_form = form;
  return cost;
}

LqOracle lq_analytic_oracle(int horizon, double dt, double q, double r, double terminal_weight,
                            double noise_scale) {
  if (horizon < 1 || !(dt > 0.0)) {
    throw ConfigError("lq oracle needs horizon >= 1 and dt > 0");
  }
  if (!(q >= 0.0) || !(r > 0.0) || !(terminal_weight >= 0.0)) {
    throw ConfigError("lq oracle needs q >= 0, r > 0 and terminal weight >= 0");
  }
  const auto n = static_cast<std::size_t>(horizon);
  LqOracle oracle;
  oracle.dt = dt;
  oracle.gains.assign(n, 0.0);
  oracle.value_coeffs.assign(n + 1, 0.0);
  oracle.value_offsets.assign(n + 1, 0.0);
  oracle.value_coeffs[n] = terminal_weight;
  for (std::size_t i = n; i-- > 0;) {
    const double next = oracle.value_coeffs[i + 1];
    const double denom = r * dt + next * dt * dt;
    oracle.gains[i] = -next * dt / denom;
    oracle.value_coeffs[i] = q * dt + next - (next * dt) * (next * dt) / denom;
    oracle.value_offsets[i] = oracle.value_offsets[i + 1] + 0.5 * next * noise_scale * noise_scale * dt;
  }
  return oracle;
}

double lq_stationary_value(double dt, double q, double r) {
  return 0.5 * (q * dt + std::sqrt(q * q * dt * dt + 4.0 * q * r));
}

double lq_stationary_gain(double dt, double q, double r) {
  const double value = lq_stationary_value(dt, q, r);
  return -value / (r + value * dt);
}

double lq_closed_loop_cost(const LqParams& p, double gain, double x0, int horizon, double dt) {
  double x = x0;
  double total = 0.0;
  for (int i = 0; i < horizon; ++i) {
    const double u = gain * x;
    total += 0.5 * (p.state_weight * x * x + p.control_weight * u * u) * dt;
    x += u * dt;
  }
  return total + 0.5 * p.terminal_weight * x * x;
}

}  // namespace pathint
