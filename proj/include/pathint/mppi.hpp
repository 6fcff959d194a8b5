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

#ifndef PATHINT_MPPI_HPP_
#define PATHINT_MPPI_HPP_

#include <cstdint>
#include <optional>

#include "pathint/controller.hpp"
#include "pathint/core.hpp"
#include "pathint/weights.hpp"

namespace pathint {

enum class MppiWeighting {
  /// w_{i,k} from the cost-to-go G_{i,k} of each step.
  per_timestep,
  /// One weight per rollout from G_{0,k}, shared by every step.
  per_trajectory,
};

struct MppiConfig {
  int num_samples = 1024;
  int horizon = 50;
  double dt = 0.02;
  double temperature = 1.0;
  NoiseDistribution noise = NoiseDistribution::gaussian;
  /// Per-channel sigma. Empty means the model's diffusion_scale.
  Vector noise_scale;
  double log_normal_mean = 0.0;
  double log_normal_std = 0.5;
  /// Smooth-MPPI penalty on consecutive perturbed controls.
  double action_rate_weight = 0.0;
  double divergence_cost = 1e9;
  MppiWeighting weighting = MppiWeighting::per_timestep;
  int num_threads = 0;

  void validate() const;
};

struct MppiPlan {
  ControlSequence updated;
  /// Diagnostics of the step-0 weights.
  SamplingDiagnostics diagnostics;
  WeightVector weights;
  /// G_{0,k} of every rollout.
  Vector total_costs;
};

/// u_i <- u_i + sum_k w_{i,k} du_{i,k}. `first_step_weights`, when given,
/// receives the weights used for u_0.
ControlSequence mppi_update(const ControlSequence& nominal, const NoiseSequence& noise,
                            const RowMatrix& costs_to_go, double lambda, MppiWeighting weighting,
                            WeightVector* first_step_weights = nullptr);

/// One MPPI iteration: sample perturbations, roll out, weight, update.
/// Throws PlanningFailed if every rollout diverged.
MppiPlan mppi_plan_step(const DynamicsModel& model, const CostModel& cost,
                        const ControlSequence& nominal, const Vector& x0, double t0,
                        const MppiConfig& config, std::uint64_t seed,
                        const std::optional<Vector>& previous_control = std::nullopt);

/// Receding-horizon MPPI: plan, emit u_0, shift the sequence.
class MppiController : public Controller {
 public:
  MppiController(DynamicsModel model, CostModel cost, MppiConfig config, std::uint64_t seed,
                 std::optional<ControlSequence> initial = std::nullopt);

  ControlStep step(const Vector& observation, double time) override;
  std::string name() const override { return "mppi"; }
  int num_samples() const override { return config_.num_samples; }

  const ControlSequence& nominal() const { return nominal_; }
  const std::optional<MppiPlan>& last_plan() const { return last_plan_; }

 private:
  DynamicsModel model_;
  CostModel cost_;
  MppiConfig config_;
  std::uint64_t seed_;
  ControlSequence nominal_;
  std::optional<Vector> previous_control_;
  std::optional<MppiPlan> last_plan_;
  std::uint64_t step_count_ = 0;
};

/// Closed-loop MPPI on `model` used as both planner model and plant.
TrajectoryLog mppi_control_loop(const DynamicsModel& model, const CostModel& cost, const Vector& x0,
                                const MppiConfig& config, int sim_steps, std::uint64_t seed,
                                const PlantOptions& plant = {}, double t0 = 0.0);

}  // namespace pathint

#endif  // PATHINT_MPPI_HPP_
