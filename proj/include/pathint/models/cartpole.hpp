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

#ifndef PATHINT_MODELS_CARTPOLE_HPP_
#define PATHINT_MODELS_CARTPOLE_HPP_

#include <vector>

#include "pathint/core.hpp"

namespace pathint {

struct CartPoleParams {
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  /// Distance from the pivot to the pole's center of mass.
  double pole_half_length = 0.5;
  double gravity = 9.81;
  double force_limit = 10.0;
  /// Planner exploration noise on the force channel, in N.
  double noise_scale = 1.0;

  void validate() const;
};

/// State (x, xdot, theta, thetadot) with theta = 0 upright. The force is clamped
/// to +-force_limit.
void cartpole_dynamics(const CartPoleParams& p, ConstVectorRef state, double force, VectorRef dxdt);
Vector cartpole_dynamics(const CartPoleParams& p, const Vector& state, double force);

/// Total mechanical energy of cart and pole (uniform rod, pivot at the cart).
double cartpole_energy(const CartPoleParams& p, const Vector& state);

DynamicsModel make_cartpole_model(const CartPoleParams& p);

/// Wraps to (-pi, pi].
double wrap_angle(double angle);

struct CartPoleCostWeights {
  double position = 1.0;
  double velocity = 0.1;
  double angle = 10.0;
  double angular_velocity = 0.1;
  /// Multiplies the running weights for the terminal cost.
  double terminal_scale = 0.0;
  /// R in 1/2 u'Ru.
  double control = 0.01;

  void validate() const;
};

/// Quadratic cost on (x, xdot, wrapped theta, thetadot).
CostModel make_cartpole_cost(const CartPoleCostWeights& w);

/// True when |theta| < threshold at every logged time in the final `hold` seconds.
bool cartpole_swingup_success(const std::vector<double>& times, const std::vector<double>& angles,
                              double duration, double hold = 2.0, double threshold = 0.1);

}  // namespace pathint

#endif  // PATHINT_MODELS_CARTPOLE_HPP_
