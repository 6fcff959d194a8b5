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

#ifndef PATHINT_PI2_CMA_HPP_
#define PATHINT_PI2_CMA_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "pathint/controller.hpp"
#include "pathint/core.hpp"
#include "pathint/policy.hpp"
#include "pathint/weights.hpp"

namespace pathint {

enum class CovarianceCentering {
  /// Sigma_i = sum_k w_ik (theta_ik - theta)(theta_ik - theta)' around the old theta.
  previous_mean,
  /// Around the weighted mean theta_i instead.
  weighted_mean,
};

enum class ExplorationMode {
  /// A fresh parameter sample theta_{i,k} at every time step.
  per_step,
  /// One parameter sample per rollout, held over the horizon.
  per_rollout,
};

struct Pi2CmaConfig {
  int num_samples = 32;
  int horizon = 40;
  double dt = 0.05;
  double temperature = 1.0;
  double covariance_floor = 1e-8;
  CovarianceCentering centering = CovarianceCentering::previous_mean;
  ExplorationMode exploration = ExplorationMode::per_step;
  /// false keeps Sigma fixed (plain PI2).
  bool adapt_covariance = true;
  double divergence_cost = 1e9;
  int num_threads = 0;

  void validate() const;
};

/// (N - i) / sum_j (N - j) for i = 0..N-1. The last entry absorbs rounding so the
/// left-to-right sum is exactly 1.
Vector temporal_weights(int horizon);

struct Pi2CmaStep {
  PolicyParams params;
  /// w_{i,k}, N x K; every row sums to 1.
  RowMatrix weights;
  Vector total_costs;
  /// Diagnostics of the step-0 weights.
  SamplingDiagnostics diagnostics;
  bool covariance_repaired = false;
};

/// One PI2-CMA update from initial state x_init.
Pi2CmaStep pi2_cma_iterate(const DynamicsModel& model, const CostModel& cost,
                           const PolicyParams& params, const Vector& x_init, double t0,
                           const Pi2CmaConfig& config, std::uint64_t seed);

struct Pi2CmaHistory {
  PolicyParams params;
  /// Mean sampled rollout cost per iteration.
  std::vector<double> mean_costs;
  std::vector<SamplingDiagnostics> diagnostics;
};

/// Draws x_init for an iteration from (iteration, seed).
using InitialStateSampler = std::function<Vector(int iteration, std::uint64_t seed)>;

Pi2CmaHistory pi2_cma_optimize(const DynamicsModel& model, const CostModel& cost,
                               PolicyParams params, const InitialStateSampler& x_init, double t0,
                               const Pi2CmaConfig& config, int iterations, std::uint64_t seed);

/// Receding-horizon PI2-CMA over an open-loop control sequence: the policy is a
/// time-indexed lookup u(t_i) = theta_i (one-hot features), so each plan step is
/// one PI2-CMA iteration warm-started from the shifted previous parameters.
/// Exploration is always per_rollout here.
class Pi2CmaController : public Controller {
 public:
  Pi2CmaController(DynamicsModel model, CostModel cost, Pi2CmaConfig config,
                   Vector initial_std, std::uint64_t seed);

  ControlStep step(const Vector& observation, double time) override;
  std::string name() const override { return "pi2_cma"; }
  int num_samples() const override { return config_.num_samples; }

 private:
  DynamicsModel model_;
  CostModel cost_;
  Pi2CmaConfig config_;
  Matrix initial_sigma_;
  std::uint64_t seed_;
  PolicyParams params_;
  std::uint64_t step_count_ = 0;
};

}  // namespace pathint

#endif  // PATHINT_PI2_CMA_HPP_
