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

#include "pathint/mppi.hpp"

#include <fmt/format.h>

#include "pathint/rng.hpp"

namespace pathint {

void MppiConfig::validate() const {
  if (num_samples < 1) {
    throw ConfigError(fmt::format("mppi.num_samples must be >= 1, got {}", num_samples));
  }
  if (horizon < 1) {
    throw ConfigError(fmt::format("mppi.horizon must be >= 1, got {}", horizon));
  }
  if (!(dt > 0.0)) {
    throw ConfigError(fmt::format("mppi.dt must be > 0, got {}", dt));
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ConfigError(fmt::format("mppi.temperature must be > 0, got {}", temperature));
  }
  if (!(action_rate_weight >= 0.0)) {
    throw ConfigError("mppi.action_rate_weight must be >= 0");
  }
  if (!(log_normal_std >= 0.0)) {
    throw ConfigError("mppi.log_normal_std must be >= 0");
  }
  if ((noise_scale.array() < 0.0).any()) {
    throw ConfigError("mppi.noise_scale entries must be >= 0");
  }
}

ControlSequence mppi_update(const ControlSequence& nominal, const NoiseSequence& noise,
                            const RowMatrix& costs_to_go, double lambda, MppiWeighting weighting,
                            WeightVector* first_step_weights) {
  const int horizon = nominal.horizon();
  const int samples = noise.num_rollouts();
  if (costs_to_go.rows() != samples || costs_to_go.cols() != horizon ||
      noise.horizon() != horizon || noise.control_dim() != nominal.control_dim()) {
    throw ConfigError("mppi_update: nominal, noise and costs-to-go shapes disagree");
  }
  ControlSequence updated = nominal;
  auto u = updated.values();
  std::optional<WeightVector> shared;
  if (weighting == MppiWeighting::per_trajectory) {
    shared = softmax_weights(costs_to_go.col(0), lambda);
  }
  Vector increment(nominal.control_dim());
  for (int i = 0; i < horizon; ++i) {
    const WeightVector w = shared ? *shared : softmax_weights(costs_to_go.col(i), lambda);
    increment.setZero();
    for (int k = 0; k < samples; ++k) {
      const double wk = w.weights[k];
      if (wk != 0.0) {
        increment += wk * noise.rollout(k).row(i).transpose();
      }
    }
    u.row(i) += increment.transpose();
    if (i == 0 && first_step_weights != nullptr) {
      *first_step_weights = w;
    }
  }
  return updated;
}

MppiPlan mppi_plan_step(const DynamicsModel& model, const CostModel& cost,
                        const ControlSequence& nominal, const Vector& x0, double t0,
                        const MppiConfig& config, std::uint64_t seed,
                        const std::optional<Vector>& previous_control) {
  config.validate();
  if (nominal.horizon() != config.horizon) {
    throw ConfigError(fmt::format("nominal horizon {} differs from mppi.horizon {}",
                                  nominal.horizon(), config.horizon));
  }
  if (!x0.allFinite()) {
    throw ConfigError("mppi_plan_step: initial state must be finite");
  }
  NoiseSpec spec;
  spec.scale = config.noise_scale.size() > 0 ? config.noise_scale : model.diffusion_scale;
  if (spec.scale.size() != model.control_dim) {
    throw ConfigError("mppi.noise_scale must have one entry per control channel");
  }
  spec.distribution = config.noise;
  spec.log_normal_mean = config.log_normal_mean;
  spec.log_normal_std = config.log_normal_std;
  const NoiseSequence noise = generate_noise(config.num_samples, config.horizon, config.dt, spec, seed);

  RolloutOptions options;
  options.divergence_cost = config.divergence_cost;
  options.previous_control = previous_control;
  options.action_rate_weight = config.action_rate_weight;
  options.num_threads = config.num_threads;
  const RolloutBatch batch = rollout_batch(model, cost, nominal, noise, x0, t0, options);

  const Vector totals = batch.total_costs();
  if (batch.num_diverged() == batch.num_rollouts()) {
    SamplingDiagnostics d;
    d.num_samples = batch.num_rollouts();
    d.cost_mean = d.cost_min = config.divergence_cost;
    throw PlanningFailed("every rollout diverged", d);
  }

  WeightVector first;
  ControlSequence updated =
      mppi_update(nominal, noise, batch.costs_to_go(), config.temperature, config.weighting, &first);
  if (model.has_control_limits()) {
    auto u = updated.values();
    for (int i = 0; i < u.rows(); ++i) {
      u.row(i) = u.row(i).cwiseMax(model.control_lower.transpose()).cwiseMin(model.control_upper.transpose());
    }
  }
  MppiPlan plan{std::move(updated), diagnose(totals, first), first, totals};
  return plan;
}

MppiController::MppiController(DynamicsModel model, CostModel cost, MppiConfig config,
                               std::uint64_t seed, std::optional<ControlSequence> initial)
    : model_(std::move(model)),
      cost_(std::move(cost)),
      config_(std::move(config)),
      seed_(seed),
      nominal_(initial ? *initial : ControlSequence(config_.horizon, config_.dt, model_.control_dim)) {
  config_.validate();
  model_.validate();
  cost_.validate(model_.control_dim);
  if (nominal_.horizon() != config_.horizon || nominal_.control_dim() != model_.control_dim) {
    throw ConfigError("initial control sequence does not match the MPPI configuration");
  }
}

ControlStep MppiController::step(const Vector& observation, double time) {
  const std::uint64_t plan_seed = derive_seed(seed_, step_count_++);
  MppiPlan plan = mppi_plan_step(model_, cost_, nominal_, observation, time, config_, plan_seed,
                                 previous_control_);
  ControlStep out;
  out.control = plan.updated.at(0);
  model_.clamp(out.control);
  out.diagnostics = plan.diagnostics;
  out.cost_to_go = plan.weights.free_energy;
  previous_control_ = out.control;
  nominal_ = shift_receding_horizon(plan.updated);
  last_plan_ = std::move(plan);
  return out;
}

TrajectoryLog mppi_control_loop(const DynamicsModel& model, const CostModel& cost, const Vector& x0,
                                const MppiConfig& config, int sim_steps, std::uint64_t seed,
                                const PlantOptions& plant, double t0) {
  if (sim_steps < 1) {
    throw ConfigError("mppi_control_loop needs sim_steps >= 1");
  }
  MppiController controller(model, cost, config, seed);
  TrajectoryLog log;
  run_closed_loop(controller, model, cost, x0, t0, config.dt, sim_steps, plant, log);
  return log;
}

}  // namespace pathint
