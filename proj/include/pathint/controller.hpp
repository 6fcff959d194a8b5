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

#ifndef PATHINT_CONTROLLER_HPP_
#define PATHINT_CONTROLLER_HPP_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pathint/core.hpp"
#include "pathint/weights.hpp"

namespace pathint {

/// Raised when a plan step cannot produce a control, e.g. every rollout diverged.
class PlanningFailed : public Error {
 public:
  PlanningFailed(const std::string& what, SamplingDiagnostics diagnostics, int step = -1)
      : Error(what), diagnostics_(diagnostics), step_(step) {}

  const SamplingDiagnostics& diagnostics() const { return diagnostics_; }
  /// Closed-loop step index, or -1 outside a control loop.
  int step() const { return step_; }

 private:
  SamplingDiagnostics diagnostics_;
  int step_;
};

struct ControlStep {
  Vector control;
  SamplingDiagnostics diagnostics;
  /// Free-energy estimate of the cost-to-go from the current state.
  double cost_to_go = std::numeric_limits<double>::quiet_NaN();
};

/// Uniform receding-horizon interface: (observation, time) -> (control, diagnostics).
/// A controller is single-writer: it may move between threads but must not be
/// stepped concurrently.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual ControlStep step(const Vector& observation, double time) = 0;
  virtual std::string name() const = 0;
  virtual int num_samples() const = 0;
};

struct LogRecord {
  double time = 0.0;
  Vector state;
  Vector control;
  double stage_cost = 0.0;
  double cost_to_go = 0.0;
  SamplingDiagnostics diagnostics;
  double plan_time_ms = 0.0;
};

struct TrajectoryLog {
  int state_dim = 0;
  int control_dim = 0;
  int num_samples = 0;
  std::vector<LogRecord> records;
};

struct PlantOptions {
  /// Adds diffusion_scale * xi / sqrt(dt) to the applied control when true.
  bool noise = false;
  std::uint64_t seed = 0;
};

/// Runs `steps` iterations of: plan, apply the control to the plant, advance.
/// Records are appended to `log` as they are produced, so a failure leaves the
/// partial log in place. Planning failures are rethrown with the step index.
void run_closed_loop(Controller& controller, const DynamicsModel& plant, const CostModel& cost,
                     const Vector& x0, double t0, double dt, int steps, const PlantOptions& plant_options,
                     TrajectoryLog& log);

}  // namespace pathint

#endif  // PATHINT_CONTROLLER_HPP_
