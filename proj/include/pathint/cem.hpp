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

#ifndef PATHINT_CEM_HPP_
#define PATHINT_CEM_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "pathint/controller.hpp"
#include "pathint/core.hpp"
#include "pathint/policy.hpp"
#include "pathint/weights.hpp"

namespace pathint {

enum class CemCentering {
  /// Elite scatter around the mean the candidates were drawn from.
  previous_mean,
  /// Elite scatter around the refitted elite mean.
  elite_mean,
};

struct CemConfig {
  int num_samples = 64;
  /// K_e, with 1 <= K_e < K.
  int elite_count = 8;
  int max_iters = 50;
  /// Stop once |mean_{i+1} - mean_i| falls below this.
  double tolerance = 1e-6;
  /// Minimum eigenvalue kept in the refitted covariance.
  double covariance_floor = 1e-8;
  CemCentering centering = CemCentering::previous_mean;
  /// Reuse the same standard-normal draws every iteration.
  bool common_random_numbers = false;
  int num_threads = 0;

  void validate() const;
};

struct EliteSet {
  /// gamma: the K_e-th smallest cost.
  double threshold = 0.0;
  /// Every index with cost <= gamma, ascending.
  std::vector<int> indices;
};

/// Elite threshold and set over the finite costs.
EliteSet select_elites(const Vector& costs, int elite_count);

struct CemIteration {
  int iteration = 0;
  double threshold = 0.0;
  double best_cost = 0.0;
  double elite_mean_cost = 0.0;
  double mean_change = 0.0;
  int elite_size = 0;
  /// Mean after this iteration's refit.
  Vector mean;
  /// Uniform-over-elites weights; free_energy holds the elite mean cost.
  SamplingDiagnostics diagnostics;
};

struct CemResult {
  Vector mean;
  Matrix covariance;
  std::vector<CemIteration> history;
  bool converged = false;
  /// Diagnostics of the last iteration.
  SamplingDiagnostics diagnostics;
};

/// Costs for a K x n batch of candidate parameter vectors.
using BatchObjective = std::function<Vector(const RowMatrix& candidates)>;

/// Gaussian cross-entropy minimization: sample, keep the elites, refit the
/// mean and (floored) covariance to them, repeat.
CemResult cem_minimize(const BatchObjective& objective, Vector mean, Matrix covariance,
                       const CemConfig& config, std::uint64_t seed);

struct CemTrajectoryResult {
  ControlSequence controls;
  CemResult result;
};

/// CEM over open-loop control sequences scored by their noise-free rollout cost.
CemTrajectoryResult cem_trajopt(const DynamicsModel& model, const CostModel& cost,
                                const ControlSequence& initial, const Vector& initial_std,
                                const Vector& x0, double t0, const CemConfig& config,
                                std::uint64_t seed, double divergence_cost = 1e9);

struct CemPolicyResult {
  PolicyParams params;
  CemResult result;
};

/// CEM over feedback-policy parameters scored by the noise-free closed-loop cost;
/// the search starts from (params.theta, params.sigma).
CemPolicyResult cem_trajopt(const DynamicsModel& model, const CostModel& cost,
                            const PolicyParams& initial, const Vector& x0, double t0, int horizon,
                            double dt, const CemConfig& config, std::uint64_t seed,
                            double divergence_cost = 1e9);

/// Receding-horizon CEM: a few CEM iterations per control step, warm-started
/// from the shifted previous solution.
class CemController : public Controller {
 public:
  CemController(DynamicsModel model, CostModel cost, CemConfig config, int horizon, double dt,
                Vector initial_std, std::uint64_t seed);

  ControlStep step(const Vector& observation, double time) override;
  std::string name() const override { return "cem"; }
  int num_samples() const override { return config_.num_samples; }

 private:
  DynamicsModel model_;
  CostModel cost_;
  CemConfig config_;
  Vector initial_std_;
  std::uint64_t seed_;
  ControlSequence mean_;
  std::uint64_t step_count_ = 0;
};

}  // namespace pathint

#endif  // PATHINT_CEM_HPP_
