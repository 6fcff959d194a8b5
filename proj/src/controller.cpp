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

#include "pathint/controller.hpp"

#include <fmt/format.h>

#include <chrono>

#include "pathint/rng.hpp"

namespace pathint {

void run_closed_loop(Controller& controller, const DynamicsModel& plant, const CostModel& cost,
                     const Vector& x0, double t0, double dt, int steps, const PlantOptions& plant_options,
                     TrajectoryLog& log) {
  if (steps < 1) {
    throw ConfigError("closed-loop simulation needs at least one step");
  }
  plant.validate();
  cost.validate(plant.control_dim);
  log.state_dim = plant.state_dim;
  log.control_dim = plant.control_dim;
  log.num_samples = controller.num_samples();

  detail::RolloutWorkspace ws(plant.state_dim, plant.control_dim);
  ws.x = x0;
  std::vector<double> xi(static_cast<std::size_t>(plant.control_dim));
  const double inv_sqrt_dt = 1.0 / std::sqrt(dt);

  for (int j = 0; j < steps; ++j) {
    const double t = t0 + j * dt;
    const auto start = std::chrono::steady_clock::now();
    ControlStep planned;
    try {
      planned = controller.step(ws.x, t);
    } catch (const PlanningFailed& e) {
      throw PlanningFailed(fmt::format("step {}: {}", j, e.what()), e.diagnostics(), j);
    }
    const auto stop = std::chrono::steady_clock::now();

    LogRecord record;
    record.time = t;
    record.state = ws.x;
    ws.applied = planned.control;
    plant.clamp(ws.applied);
    ws.nominal = ws.applied;
    ws.perturbation.setZero();
    record.control = ws.applied;
    record.stage_cost = cost.running_state_cost(t, ws.x) * dt + detail::control_cost(cost, ws, dt);
    record.cost_to_go = planned.cost_to_go;
    record.diagnostics = planned.diagnostics;
    record.plan_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    log.records.push_back(record);

    if (plant_options.noise) {
      fill_standard_normals(plant_options.seed, static_cast<std::uint32_t>(j), 0u,
                            streams::kPlantNoise, xi);
      for (int c = 0; c < plant.control_dim; ++c) {
        ws.applied[c] += plant.diffusion_scale[c] * xi[static_cast<std::size_t>(c)] * inv_sqrt_dt;
      }
    }
    if (!detail::integrate_in_place(plant, t, dt, ws)) {
      throw IntegrationDiverged(-1, j, fmt::format("plant state became non-finite at step {}", j));
    }
  }
}

}  // namespace pathint
