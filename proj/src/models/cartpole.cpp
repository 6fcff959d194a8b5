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

#include "pathint/models/cartpole.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pathint {

void CartPoleParams::validate() const {
  if (!(cart_mass > 0.0) || !(pole_mass > 0.0) || !(pole_half_length > 0.0) || !(gravity > 0.0)) {
    throw ConfigError("cartpole masses, half-length and gravity must be > 0");
  }
  if (!(force_limit > 0.0)) {
    throw ConfigError("cartpole.force_limit must be > 0");
  }
  if (!(noise_scale >= 0.0)) {
    throw ConfigError("cartpole.noise_scale must be >= 0");
  }
}

void CartPoleCostWeights::validate() const {
  if (position < 0.0 || velocity < 0.0 || angle < 0.0 || angular_velocity < 0.0 ||
      terminal_scale < 0.0 || control < 0.0) {
    throw ConfigError("cartpole cost weights must be >= 0");
  }
}

void cartpole_dynamics(const CartPoleParams& p, ConstVectorRef state, double force, VectorRef dxdt) {
  const double f = std::clamp(force, -p.force_limit, p.force_limit);
  const double total = p.cart_mass + p.pole_mass;
  const double ml = p.pole_mass * p.pole_half_length;
  const double th = state[2];
  const double thd = state[3];
  const double s = std::sin(th);
  const double c = std::cos(th);
  const double temp = (f + ml * thd * thd * s) / total;
  const double thdd =
      (p.gravity * s - c * temp) / (p.pole_half_length * (4.0 / 3.0 - p.pole_mass * c * c / total));
  const double xdd = temp - ml * thdd * c / total;
  dxdt[0] = state[1];
  dxdt[1] = xdd;
  dxdt[2] = thd;
  dxdt[3] = thdd;
}

Vector cartpole_dynamics(const CartPoleParams& p, const Vector& state, double force) {
  Vector d(4);
  cartpole_dynamics(p, state, force, d);
  return d;
}

double cartpole_energy(const CartPoleParams& p, const Vector& state) {
  const double total = p.cart_mass + p.pole_mass;
  const double l = p.pole_half_length;
  const double m = p.pole_mass;
  const double xd = state[1];
  const double thd = state[3];
  const double c = std::cos(state[2]);
  return 0.5 * total * xd * xd + m * l * xd * thd * c + (2.0 / 3.0) * m * l * l * thd * thd +
         m * p.gravity * l * c;
}

DynamicsModel make_cartpole_model(const CartPoleParams& p) {
  p.validate();
  DynamicsModel model;
  model.state_dim = 4;
  model.control_dim = 1;
  model.drift = [p](double, ConstVectorRef x, VectorRef dxdt) { cartpole_dynamics(p, x, 0.0, dxdt); };
  model.input_matrix = [p](double, ConstVectorRef x, MatrixRef g) {
    const double total = p.cart_mass + p.pole_mass;
    const double l = p.pole_half_length;
    const double c = std::cos(x[2]);
    const double dthdd = -c / (total * l * (4.0 / 3.0 - p.pole_mass * c * c / total));
    g(0, 0) = 0.0;
    g(1, 0) = 1.0 / total - p.pole_mass * l * c * dthdd / total;
    g(2, 0) = 0.0;
    g(3, 0) = dthdd;
  };
  model.diffusion_scale = Vector::Constant(1, p.noise_scale);
  model.control_lower = Vector::Constant(1, -p.force_limit);
  model.control_upper = Vector::Constant(1, p.force_limit);
  return model;
}

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle + std::numbers::pi, two_pi);
  if (a < 0.0) {
    a += two_pi;
  }
  a -= std::numbers::pi;
  return a == -std::numbers::pi ? std::numbers::pi : a;
}

CostModel make_cartpole_cost(const CartPoleCostWeights& w) {
  w.validate();
  auto quadratic = [w](ConstVectorRef x) {
    const double th = wrap_angle(x[2]);
    return w.position * x[0] * x[0] + w.velocity * x[1] * x[1] + w.angle * th * th +
           w.angular_velocity * x[3] * x[3];
  };
  CostModel cost;
  cost.running_state_cost = [quadratic](double, ConstVectorRef x) { return quadratic(x); };
  cost.terminal_cost = [quadratic, scale = w.terminal_scale](ConstVectorRef x) {
    return scale * quadratic(x);
  };
  cost.control_weight = Matrix::Constant(1, 1, w.control);
  return cost;
}

bool cartpole_swingup_success(const std::vector<double>& times, const std::vector<double>& angles,
                              double duration, double hold, double threshold) {
  if (times.size() != angles.size()) {
    throw ConfigError("swing-up check needs one angle per time");
  }
  bool any = false;
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (times[j] >= duration - hold - 1e-9) {
      any = true;
      if (!(std::abs(wrap_angle(angles[j])) < threshold)) {
        return false;
      }
    }
  }
  return any;
}

}  // namespace pathint
