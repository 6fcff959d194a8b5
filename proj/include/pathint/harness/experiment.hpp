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

#ifndef PATHINT_HARNESS_EXPERIMENT_HPP_
#define PATHINT_HARNESS_EXPERIMENT_HPP_

#include <memory>
#include <string>

#include "pathint/controller.hpp"
#include "pathint/harness/config.hpp"

namespace pathint {

struct RunMetrics {
  bool success = false;
  double accumulated_cost = 0.0;
  /// l-infinity tracking error: |theta| over the hold window for the cart-pole,
  /// |cross-track| for the bicycle, the scenario's relative oracle error otherwise.
  double max_tracking_error = 0.0;
  /// Mean over steps and channels of |u_j - u_{j-1}|.
  double mean_abs_du = 0.0;
  double mean_plan_ms = 0.0;
  double p95_plan_ms = 0.0;
  int steps = 0;
};

struct ExperimentResult {
  TrajectoryLog log;
  RunMetrics metrics;
  /// Scenario-specific values (oracle references, clearance, ...).
  Json details = Json::object();
  bool failed = false;
  std::string error;

  Json summary(const ExperimentSpec& spec) const;
};

/// Model, cost and initial state of a dynamical scenario.
struct ScenarioSetup {
  DynamicsModel model;
  CostModel cost;
  Vector x0;
  /// Bicycle only.
  std::shared_ptr<const Track> track;
};

ScenarioSetup make_scenario(const ExperimentSpec& spec);

std::unique_ptr<Controller> make_controller(const ExperimentSpec& spec, const ScenarioSetup& setup);

/// Runs the experiment. Planning or integration failures are reported through
/// `failed`/`error` with the partial log kept; configuration errors propagate.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Fills success, accumulated cost, tracking error, |du| and timing from a log.
/// Only the log-based scenarios (cartpole_swingup, bicycle_track) decide
/// success here.
RunMetrics compute_metrics(const ExperimentSpec& spec, const TrajectoryLog& log, Json* details = nullptr);

/// Writes log.csv, timing.csv, summary.json and config.json into `dir`.
void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentResult& result,
                              const std::string& dir);

}  // namespace pathint

#endif  // PATHINT_HARNESS_EXPERIMENT_HPP_
