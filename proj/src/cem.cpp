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

#include "pathint/cem.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

#include "pathint/rng.hpp"
#include "pathint/weights.hpp"

namespace pathint {

void CemConfig::validate() const {
  if (num_samples < 2) {
    throw ConfigError(fmt::format("cem.num_samples must be >= 2, got {}", num_samples));
  }
  if (elite_count < 1 || elite_count >= num_samples) {
    throw ConfigError(fmt::format("cem.elite_count must satisfy 1 <= K_e < K, got K_e={} K={}",
                                  elite_count, num_samples));
  }
  if (max_iters < 1) {
    throw ConfigError("cem.max_iters must be >= 1");
  }
  if (!(tolerance >= 0.0)) {
    throw ConfigError("cem.tolerance must be >= 0");
  }
  if (!(covariance_floor > 0.0)) {
    throw ConfigError("cem.covariance_floor must be > 0");
  }
}

EliteSet select_elites(const Vector& costs, int elite_count) {
  std::vector<double> finite;
  finite.reserve(static_cast<std::size_t>(costs.size()));
  for (Eigen::Index k = 0; k < costs.size(); ++k) {
    if (std::isfinite(costs[k])) {
      finite.push_back(costs[k]);
    }
  }
  if (finite.empty()) {
    throw DegenerateBatch("every CEM candidate has a non-finite cost");
  }
  const auto rank = static_cast<std::size_t>(std::min<int>(elite_count, static_cast<int>(finite.size())) - 1);
  std::nth_element(finite.begin(), finite.begin() + static_cast<std::ptrdiff_t>(rank), finite.end());
  EliteSet elites;
  elites.threshold = finite[rank];
  for (Eigen::Index k = 0; k < costs.size(); ++k) {
    if (std::isfinite(costs[k]) && costs[k] <= elites.threshold) {
      elites.indices.push_back(static_cast<int>(k));
    }
  }
  return elites;
}

CemResult cem_minimize(const BatchObjective& objective, Vector mean, Matrix covariance,
                       const CemConfig& config, std::uint64_t seed) {
  config.validate();
  const int dim = static_cast<int>(mean.size());
  if (dim < 1 || covariance.rows() != dim || covariance.cols() != dim) {
    throw ConfigError("CEM mean and covariance dimensions disagree");
  }
  CemResult result;
  result.covariance = floor_covariance(covariance, config.covariance_floor);
  result.mean = std::move(mean);

  RowMatrix candidates(config.num_samples, dim);
  std::vector<double> xi(static_cast<std::size_t>(dim));
  for (int it = 0; it < config.max_iters; ++it) {
    const std::uint64_t draw_seed = config.common_random_numbers ? seed : derive_seed(seed, it);
    Eigen::LLT<Matrix> llt(result.covariance);
    const Matrix chol = llt.matrixL();
    for (int k = 0; k < config.num_samples; ++k) {
      fill_standard_normals(draw_seed, static_cast<std::uint32_t>(k), 0u, streams::kParameterSamples, xi);
      const Eigen::Map<const Vector> z(xi.data(), dim);
      candidates.row(k) = (result.mean + chol * z).transpose();
    }
    const Vector costs = objective(candidates);
    if (costs.size() != config.num_samples) {
      throw ConfigError("CEM objective returned the wrong number of costs");
    }
    const EliteSet elites = select_elites(costs, config.elite_count);
    const auto elite_size = static_cast<double>(elites.indices.size());

    Vector new_mean = Vector::Zero(dim);
    double elite_cost = 0.0;
    for (int idx : elites.indices) {
      new_mean += candidates.row(idx).transpose();
      elite_cost += costs[idx];
    }
    new_mean /= elite_size;
    const Vector center = config.centering == CemCentering::previous_mean ? result.mean : new_mean;
    Matrix new_cov = Matrix::Zero(dim, dim);
    for (int idx : elites.indices) {
      const Vector d = candidates.row(idx).transpose() - center;
      new_cov.noalias() += d * d.transpose();
    }
    new_cov /= elite_size;

    CemIteration record;
    record.iteration = it;
    record.threshold = elites.threshold;
    record.best_cost = costs.minCoeff();
    record.elite_mean_cost = elite_cost / elite_size;
    record.mean_change = (new_mean - result.mean).norm();
    record.elite_size = static_cast<int>(elites.indices.size());
    WeightVector w;
    w.weights = Vector::Zero(config.num_samples);
    for (int idx : elites.indices) {
      w.weights[idx] = 1.0 / elite_size;
    }
    w.free_energy = record.elite_mean_cost;
    record.diagnostics = diagnose(costs, w);
    record.mean = new_mean;
    result.diagnostics = record.diagnostics;
    result.history.push_back(record);

    result.mean = std::move(new_mean);
    result.covariance = floor_covariance(new_cov, config.covariance_floor);
    if (record.mean_change < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

namespace {

BatchObjective sequence_objective(const DynamicsModel& model, const CostModel& cost, int horizon,
                                  double dt, const Vector& x0, double t0, int threads,
                                  double divergence_cost) {
  return [&model, &cost, horizon, dt, x0, t0, threads, divergence_cost](const RowMatrix& candidates) {
    const int m = model.control_dim;
    RolloutOptions options;
    options.divergence_cost = divergence_cost;
    options.num_threads = threads;
    const RolloutBatch batch = simulate_rollouts(
        model, cost, static_cast<int>(candidates.rows()), horizon, dt, x0, t0,
        [&](int k, int i, double, ConstVectorRef, VectorRef base, VectorRef) {
          base = candidates.row(k).segment(i * m, m).transpose();
        },
        options);
    return batch.total_costs();
  };
}

}  // namespace

CemTrajectoryResult cem_trajopt(const DynamicsModel& model, const CostModel& cost,
                                const ControlSequence& initial, const Vector& initial_std,
                                const Vector& x0, double t0, const CemConfig& config,
                                std::uint64_t seed, double divergence_cost) {
  const int horizon = initial.horizon();
  const int m = model.control_dim;
  if (initial.control_dim() != m) {
    throw ConfigError("initial control sequence does not match the model control dimension");
  }
  if (initial_std.size() != m || (initial_std.array() <= 0.0).any()) {
    throw ConfigError("CEM initial_std needs one positive entry per control channel");
  }
  const int dim = horizon * m;
  Vector mean(dim);
  Vector variance(dim);
  const auto u = initial.values();
  for (int i = 0; i < horizon; ++i) {
    mean.segment(i * m, m) = u.row(i).transpose();
    variance.segment(i * m, m) = initial_std.array().square().matrix();
  }
  const BatchObjective objective =
      sequence_objective(model, cost, horizon, initial.dt(), x0, t0, config.num_threads, divergence_cost);
  CemResult result = cem_minimize(objective, mean, variance.asDiagonal().toDenseMatrix(), config, seed);
  RowMatrix controls = Eigen::Map<const RowMatrix>(result.mean.data(), horizon, m);
  return {ControlSequence(initial.dt(), std::move(controls)), std::move(result)};
}

CemPolicyResult cem_trajopt(const DynamicsModel& model, const CostModel& cost,
                            const PolicyParams& initial, const Vector& x0, double t0, int horizon,
                            double dt, const CemConfig& config, std::uint64_t seed,
                            double divergence_cost) {
  initial.validate();
  if (initial.control_dim != model.control_dim) {
    throw ConfigError("policy control dimension does not match the model");
  }
  const int n = initial.num_params();
  const BatchObjective objective = [&](const RowMatrix& candidates) {
    RolloutOptions options;
    options.divergence_cost = divergence_cost;
    options.num_threads = config.num_threads;
    const RolloutBatch batch = simulate_rollouts(
        model, cost, static_cast<int>(candidates.rows()), horizon, dt, x0, t0,
        [&](int k, int, double t, ConstVectorRef x, VectorRef base, VectorRef) {
          thread_local Matrix scratch;
          scratch.resize(n, initial.control_dim);
          initial.evaluate(t, x, candidates.row(k).transpose(), base, scratch);
        },
        options);
    return batch.total_costs();
  };
  CemResult result = cem_minimize(objective, initial.theta, initial.sigma, config, seed);
  PolicyParams params = initial;
  params.theta = result.mean;
  params.sigma = result.covariance;
  return {std::move(params), std::move(result)};
}

CemController::CemController(DynamicsModel model, CostModel cost, CemConfig config, int horizon,
                             double dt, Vector initial_std, std::uint64_t seed)
    : model_(std::move(model)),
      cost_(std::move(cost)),
      config_(std::move(config)),
      initial_std_(std::move(initial_std)),
      seed_(seed),
      mean_(horizon, dt, model_.control_dim) {
  config_.validate();
  model_.validate();
  cost_.validate(model_.control_dim);
}

ControlStep CemController::step(const Vector& observation, double time) {
  const std::uint64_t plan_seed = derive_seed(seed_, step_count_++);
  CemTrajectoryResult solved =
      cem_trajopt(model_, cost_, mean_, initial_std_, observation, time, config_, plan_seed);
  ControlStep out;
  out.control = solved.controls.at(0);
  model_.clamp(out.control);
  out.diagnostics = solved.result.diagnostics;
  out.cost_to_go = solved.result.diagnostics.free_energy;
  mean_ = shift_receding_horizon(solved.controls);
  return out;
}

}  // namespace pathint
