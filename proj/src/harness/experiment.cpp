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

#include "pathint/harness/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "pathint/cem.hpp"
#include "pathint/harness/log_io.hpp"
#include "pathint/mppi.hpp"
#include "pathint/pi2_cma.hpp"
#include "pathint/rng.hpp"

namespace pathint {

namespace {

constexpr double kHoldWindow = 2.0;
constexpr double kSwingupThreshold = 0.1;

double percentile95(std::vector<double> values) {
  if (values.empty()) {
    return 0.0;
  }
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(values.size())));
  return values[std::max<std::size_t>(rank, 1) - 1];
}

double noise_free_cost(const DynamicsModel& model, const CostModel& cost, const ControlSequence& u,
                       const Vector& x0) {
  RolloutOptions options;
  options.num_threads = 1;
  const RolloutBatch batch = simulate_rollouts(
      model, cost, 1, u.horizon(), u.dt(), x0, 0.0,
      [&](int, int i, double, ConstVectorRef, VectorRef base, VectorRef) { base = u.at(i); }, options);
  return batch.total_costs()[0];
}

void run_lq_oracle_check(const ExperimentSpec& spec, const ScenarioSetup& setup, ExperimentResult& result) {
  const double x0 = spec.lq_x0;
  const LqParams& p = spec.lq;
  double relative = 0.0;
  double tolerance = 0.10;
  switch (spec.controller) {
    case ControllerKind::mppi:
    case ControllerKind::smooth_mppi:
    case ControllerKind::log_mppi: {
      const LqOracle oracle =
          lq_analytic_oracle(spec.mppi.horizon, spec.dt, p.state_weight, p.control_weight, p.terminal_weight);
      const double reference = oracle.control(0, x0);
      const double first = result.log.records.front().control[0];
      relative = std::abs(first - reference) / std::abs(reference);
      result.details["first_control"] = first;
      result.details["oracle_control"] = reference;
      break;
    }
    case ControllerKind::cem: {
      const LqOracle oracle =
          lq_analytic_oracle(spec.cem_horizon, spec.dt, p.state_weight, p.control_weight, p.terminal_weight);
      const CemTrajectoryResult solved =
          cem_trajopt(setup.model, setup.cost, ControlSequence(spec.cem_horizon, spec.dt, 1),
                      spec.cem_initial_std, setup.x0, 0.0, spec.cem, derive_seed(spec.seed, 0x0c3));
      const double cost = noise_free_cost(setup.model, setup.cost, solved.controls, setup.x0);
      const double reference = oracle.optimal_cost(x0);
      relative = (cost - reference) / reference;
      result.details["open_loop_cost"] = cost;
      result.details["oracle_cost"] = reference;
      result.details["cem_iterations"] = solved.result.history.size();
      break;
    }
    case ControllerKind::pi2_cma: {
      tolerance = 0.15;
      const int n = spec.pi2.horizon;
      const LqOracle oracle = lq_analytic_oracle(n, spec.dt, p.state_weight, p.control_weight, p.terminal_weight);
      PolicyParams policy = make_linear_policy(
          1, 1, [](double, ConstVectorRef x, MatrixRef h) { h(0, 0) = x[0]; }, Vector::Zero(1),
          Matrix::Constant(1, 1, spec.pi2_gain_std * spec.pi2_gain_std));
      const Pi2CmaHistory history = pi2_cma_optimize(
          setup.model, setup.cost, policy, [&](int, std::uint64_t) { return setup.x0; }, 0.0, spec.pi2,
          spec.pi2_iterations, derive_seed(spec.seed, 0x9125));
      const double gain = history.params.theta[0];
      const double cost = lq_closed_loop_cost(p, gain, x0, n, spec.dt);
      const double reference = oracle.optimal_cost(x0);
      relative = (cost - reference) / reference;
      result.details["gain"] = gain;
      result.details["closed_loop_cost"] = cost;
      result.details["oracle_cost"] = reference;
      break;
    }
  }
  result.details["relative_error"] = relative;
  result.details["tolerance"] = tolerance;
  result.metrics.max_tracking_error = std::abs(relative);
  result.metrics.success = std::abs(relative) < tolerance;
}

void run_cem_quadratic(const ExperimentSpec& spec, ExperimentResult& result) {
  const Vector target = spec.quadratic_target;
  const BatchObjective objective = [&target](const RowMatrix& candidates) {
    return Vector((candidates.rowwise() - target.transpose()).rowwise().squaredNorm());
  };
  const CemResult solved = cem_minimize(objective, spec.quadratic_mean,
                                        spec.quadratic_std.array().square().matrix().asDiagonal(), spec.cem,
                                        spec.seed);
  TrajectoryLog& log = result.log;
  log.state_dim = static_cast<int>(target.size());
  log.control_dim = 0;
  log.num_samples = spec.cem.num_samples;
  for (const CemIteration& it : solved.history) {
    LogRecord r;
    r.time = it.iteration;
    r.state = it.mean;
    r.control = Vector(0);
    r.stage_cost = it.elite_mean_cost;
    r.cost_to_go = it.threshold;
    r.diagnostics = it.diagnostics;
    log.records.push_back(std::move(r));
  }
  const double distance = (solved.mean - target).norm();
  result.metrics.success = distance < 1e-2;
  result.metrics.max_tracking_error = distance;
  result.details["distance_to_target"] = distance;
  result.details["iterations"] = solved.history.size();
  result.details["converged"] = solved.converged;
}

}  // namespace

ScenarioSetup make_scenario(const ExperimentSpec& spec) {
  ScenarioSetup setup;
  switch (spec.scenario) {
    case Scenario::cartpole_swingup:
      setup.model = make_cartpole_model(spec.cartpole);
      setup.cost = make_cartpole_cost(spec.cartpole_cost);
      setup.x0 = spec.cartpole_x0;
      break;
    case Scenario::bicycle_track: {
      auto track = std::make_shared<const Track>(
          spec.track_csv.empty() ? Track(bundled_track().waypoints(), spec.track_half_width)
                                 : load_track_csv(spec.track_csv, spec.track_half_width));
      setup.model = make_bicycle_model(spec.bicycle);
      setup.cost = make_tracking_cost(*track, spec.obstacles, spec.tracking);
      if (spec.bicycle_x0) {
        setup.x0 = *spec.bicycle_x0;
      } else {
        const auto& w = track->waypoints();
        setup.x0 = Vector::Zero(spec.bicycle.state_dim());
        setup.x0[0] = w[0].x();
        setup.x0[1] = w[0].y();
        setup.x0[2] = std::atan2(w[1].y() - w[0].y(), w[1].x() - w[0].x());
      }
      setup.track = std::move(track);
      break;
    }
    case Scenario::lq_scalar:
      setup.model = make_lq_model(spec.lq);
      setup.cost = make_lq_cost(spec.lq, spec.lq_cost_form);
      setup.x0 = Vector::Constant(1, spec.lq_x0);
      break;
    case Scenario::cem_quadratic:
      throw ConfigError("scenario cem_quadratic has no dynamical model");
  }
  return setup;
}

std::unique_ptr<Controller> make_controller(const ExperimentSpec& spec, const ScenarioSetup& setup) {
  switch (spec.controller) {
    case ControllerKind::mppi:
    case ControllerKind::smooth_mppi:
    case ControllerKind::log_mppi:
      return std::make_unique<MppiController>(setup.model, setup.cost, spec.mppi, spec.seed);
    case ControllerKind::cem: {
      CemConfig receding = spec.cem;
      receding.max_iters = spec.cem_receding_iters;
      return std::make_unique<CemController>(setup.model, setup.cost, receding, spec.cem_horizon, spec.dt,
                                             spec.cem_initial_std, spec.seed);
    }
    case ControllerKind::pi2_cma:
      return std::make_unique<Pi2CmaController>(setup.model, setup.cost, spec.pi2, spec.pi2_initial_std,
                                                spec.seed);
  }
  throw ConfigError("unknown controller");
}

RunMetrics compute_metrics(const ExperimentSpec& spec, const TrajectoryLog& log, Json* details) {
  RunMetrics m;
  m.steps = static_cast<int>(log.records.size());
  std::vector<double> plan_ms;
  double du_sum = 0.0;
  long du_count = 0;
  for (std::size_t j = 0; j < log.records.size(); ++j) {
    const LogRecord& r = log.records[j];
    m.accumulated_cost += r.stage_cost;
    plan_ms.push_back(r.plan_time_ms);
    if (j > 0 && r.control.size() > 0) {
      du_sum += (r.control - log.records[j - 1].control).cwiseAbs().sum();
      du_count += r.control.size();
    }
  }
  m.mean_abs_du = du_count > 0 ? du_sum / static_cast<double>(du_count) : 0.0;
  if (!plan_ms.empty()) {
    double total = 0.0;
    for (double v : plan_ms) {
      total += v;
    }
    m.mean_plan_ms = total / static_cast<double>(plan_ms.size());
    m.p95_plan_ms = percentile95(plan_ms);
  }

  if (spec.scenario == Scenario::cartpole_swingup) {
    std::vector<double> times;
    std::vector<double> angles;
    double worst = 0.0;
    for (const LogRecord& r : log.records) {
      times.push_back(r.time);
      angles.push_back(r.state[2]);
      if (r.time >= spec.duration - kHoldWindow - 1e-9) {
        worst = std::max(worst, std::abs(wrap_angle(r.state[2])));
      }
    }
    m.success = !log.records.empty() &&
                cartpole_swingup_success(times, angles, spec.duration, kHoldWindow, kSwingupThreshold);
    m.max_tracking_error = worst;
    if (details) {
      (*details)["hold_window_s"] = kHoldWindow;
      (*details)["angle_threshold_rad"] = kSwingupThreshold;
    }
  } else if (spec.scenario == Scenario::bicycle_track) {
    const Track track = spec.track_csv.empty() ? Track(bundled_track().waypoints(), spec.track_half_width)
                                               : load_track_csv(spec.track_csv, spec.track_half_width);
    double worst = 0.0;
    double clearance = std::numeric_limits<double>::infinity();
    int collisions = 0;
    double progress = 0.0;
    for (const LogRecord& r : log.records) {
      const Point2 p(r.state[0], r.state[1]);
      const Track::Projection proj = track.project(p);
      worst = std::max(worst, std::abs(proj.cross_track));
      const double c = obstacle_clearance(r.time, p, spec.obstacles);
      clearance = std::min(clearance, c);
      collisions += c <= 0.0 ? 1 : 0;
      progress = proj.arc_length;
    }
    const bool finished = progress >= track.length() - spec.bicycle_finish_tolerance;
    m.max_tracking_error = worst;
    m.success = !log.records.empty() && collisions == 0 && finished && worst < spec.bicycle_max_error;
    if (details) {
      (*details)["collision_steps"] = collisions;
      (*details)["min_clearance"] = clearance;
      (*details)["final_arc_length"] = progress;
      (*details)["track_length"] = track.length();
      (*details)["finished"] = finished;
    }
  }
  return m;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult result;
  if (spec.scenario == Scenario::cem_quadratic) {
    run_cem_quadratic(spec, result);
    const RunMetrics success = result.metrics;
    result.metrics = compute_metrics(spec, result.log);
    result.metrics.success = success.success;
    result.metrics.max_tracking_error = success.max_tracking_error;
    return result;
  }
  const ScenarioSetup setup = make_scenario(spec);
  std::unique_ptr<Controller> controller = make_controller(spec, setup);
  PlantOptions plant;
  plant.noise = spec.plant_noise;
  plant.seed = derive_seed(spec.seed, streams::kPlantNoise);
  try {
    run_closed_loop(*controller, setup.model, setup.cost, setup.x0, 0.0, spec.dt, spec.steps(), plant,
                    result.log);
  } catch (const PlanningFailed& e) {
    result.failed = true;
    result.error = e.what();
  } catch (const IntegrationDiverged& e) {
    result.failed = true;
    result.error = e.what();
  }
  result.log.state_dim = setup.model.state_dim;
  result.log.control_dim = setup.model.control_dim;
  result.log.num_samples = controller->num_samples();
  result.metrics = compute_metrics(spec, result.log, &result.details);
  if (spec.scenario == Scenario::lq_scalar && !result.log.records.empty()) {
    run_lq_oracle_check(spec, setup, result);
  }
  if (result.failed) {
    result.metrics.success = false;
  }
  return result;
}

Json ExperimentResult::summary(const ExperimentSpec& spec) const {
  Json s;
  s["scenario"] = to_string(spec.scenario);
  s["controller"] = to_string(spec.controller);
  s["seed"] = spec.seed;
  s["success"] = metrics.success;
  s["failed"] = failed;
  s["error"] = error;
  s["steps"] = metrics.steps;
  s["accumulated_cost"] = metrics.accumulated_cost;
  s["max_tracking_error"] = metrics.max_tracking_error;
  s["mean_abs_du"] = metrics.mean_abs_du;
  s["mean_plan_ms"] = metrics.mean_plan_ms;
  s["p95_plan_ms"] = metrics.p95_plan_ms;
  s["details"] = details;
  return s;
}

void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentResult& result,
                              const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  write_log_csv((root / "log.csv").string(), result.log);
  write_timing_csv((root / "timing.csv").string(), result.log);
  std::ofstream summary(root / "summary.json");
  summary << result.summary(spec).dump(2) << '\n';
  std::ofstream config(root / "config.json");
  config << spec.config.dump(2) << '\n';
  if (!summary || !config) {
    throw Error(fmt::format("cannot write outputs into '{}'", dir));
  }
}

}  // namespace pathint
