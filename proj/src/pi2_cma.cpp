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

#include "pathint/pi2_cma.hpp"

#include <fmt/format.h>

#include "pathint/rng.hpp"

namespace pathint {

void Pi2CmaConfig::validate() const {
  if (num_samples < 1) {
    throw ConfigError("pi2_cma.num_samples must be >= 1");
  }
  if (horizon < 1) {
    throw ConfigError("pi2_cma.horizon must be >= 1");
  }
  if (!(dt > 0.0)) {
    throw ConfigError("pi2_cma.dt must be > 0");
  }
  if (!(temperature > 0.0)) {
    throw ConfigError("pi2_cma.temperature must be > 0");
  }
  if (!(covariance_floor > 0.0)) {
    throw ConfigError("pi2_cma.covariance_floor must be > 0");
  }
}

Vector temporal_weights(int horizon) {
  if (horizon < 1) {
    throw ConfigError("temporal weights need horizon >= 1");
  }
  const double n = horizon;
  const double total = n * (n + 1.0) / 2.0;
  Vector w(horizon);
  double partial = 0.0;
  for (int i = 0; i + 1 < horizon; ++i) {
    w[i] = (n - i) / total;
    partial += w[i];
  }
  w[horizon - 1] = 1.0 - partial;
  return w;
}

Pi2CmaStep pi2_cma_iterate(const DynamicsModel& model, const CostModel& cost,
                           const PolicyParams& params, const Vector& x_init, double t0,
                           const Pi2CmaConfig& config, std::uint64_t seed) {
  config.validate();
  params.validate();
  if (params.control_dim != model.control_dim) {
    throw ConfigError("policy control dimension does not match the model");
  }
  const int K = config.num_samples;
  const int N = config.horizon;
  const int np = params.num_params();
  const bool per_step = config.exploration == ExplorationMode::per_step;
  const int draws_per_rollout = per_step ? N : 1;

  Eigen::LLT<Matrix> llt(params.sigma);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("pi2_cma: exploration covariance is not positive definite");
  }
  const Matrix chol = llt.matrixL();

  // samples[(k * draws + i) * np ...] = theta_{i,k}
  std::vector<double> samples(static_cast<std::size_t>(K) * draws_per_rollout * np);
  std::vector<double> xi(static_cast<std::size_t>(np));
  auto sample = [&](int k, int i) {
    const std::size_t off = (static_cast<std::size_t>(k) * draws_per_rollout + (per_step ? i : 0)) * np;
    return Eigen::Map<Vector>(samples.data() + off, np);
  };
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < draws_per_rollout; ++i) {
      fill_standard_normals(seed, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(i),
                            streams::kParameterSamples, xi);
      sample(k, i) = params.theta + chol * Eigen::Map<const Vector>(xi.data(), np);
    }
  }

  RolloutOptions options;
  options.divergence_cost = config.divergence_cost;
  options.num_threads = config.num_threads;
  const RolloutBatch batch = simulate_rollouts(
      model, cost, K, N, config.dt, x_init, t0,
      [&](int k, int i, double t, ConstVectorRef x, VectorRef base, VectorRef) {
        thread_local Matrix scratch;
        scratch.resize(np, params.control_dim);
        params.evaluate(t, x, sample(k, i), base, scratch);
      },
      options);

  Pi2CmaStep out;
  out.params = params;
  out.weights.resize(N, K);
  out.total_costs = batch.total_costs();
  const Vector tw = temporal_weights(N);
  Vector theta = Vector::Zero(np);
  Matrix sigma = Matrix::Zero(np, np);
  for (int i = 0; i < N; ++i) {
    const WeightVector w = softmax_weights(batch.costs_to_go().col(i), config.temperature);
    out.weights.row(i) = w.weights.transpose();
    if (i == 0) {
      out.diagnostics = diagnose(batch.costs_to_go().col(0), w);
    }
    Vector theta_i = Vector::Zero(np);
    for (int k = 0; k < K; ++k) {
      theta_i += w.weights[k] * sample(k, i);
    }
    theta += tw[i] * theta_i;
    if (config.adapt_covariance) {
      const Vector& center =
          config.centering == CovarianceCentering::previous_mean ? params.theta : theta_i;
      Matrix sigma_i = Matrix::Zero(np, np);
      for (int k = 0; k < K; ++k) {
        const Vector d = sample(k, i) - center;
        sigma_i.noalias() += w.weights[k] * d * d.transpose();
      }
      sigma += tw[i] * sigma_i;
    }
  }
  out.params.theta = theta;
  if (config.adapt_covariance) {
    out.params.sigma = floor_covariance(sigma, config.covariance_floor, &out.covariance_repaired);
    if (out.covariance_repaired) {
      warn("pi2_cma: exploration covariance lifted to the eigenvalue floor");
    }
  }
  return out;
}

Pi2CmaHistory pi2_cma_optimize(const DynamicsModel& model, const CostModel& cost,
                               PolicyParams params, const InitialStateSampler& x_init, double t0,
                               const Pi2CmaConfig& config, int iterations, std::uint64_t seed) {
  Pi2CmaHistory history;
  for (int it = 0; it < iterations; ++it) {
    const std::uint64_t it_seed = derive_seed(seed, static_cast<std::uint64_t>(it));
    const Vector x0 = x_init(it, derive_seed(it_seed, streams::kInitialState));
    Pi2CmaStep step = pi2_cma_iterate(model, cost, params, x0, t0, config, it_seed);
    history.mean_costs.push_back(step.total_costs.mean());
    history.diagnostics.push_back(step.diagnostics);
    params = std::move(step.params);
  }
  history.params = std::move(params);
  return history;
}

namespace {

PolicyParams time_indexed_policy(int horizon, int control_dim, double t0, double dt) {
  const int np = horizon * control_dim;
  auto features = [horizon, control_dim, t0, dt](double t, ConstVectorRef, MatrixRef h) {
    h.setZero();
    int i = static_cast<int>(std::lround((t - t0) / dt));
    i = std::clamp(i, 0, horizon - 1);
    for (int j = 0; j < control_dim; ++j) {
      h(i * control_dim + j, j) = 1.0;
    }
  };
  return make_linear_policy(np, control_dim, features, Vector::Zero(np), Matrix::Identity(np, np));
}

}  // namespace

Pi2CmaController::Pi2CmaController(DynamicsModel model, CostModel cost, Pi2CmaConfig config,
                                   Vector initial_std, std::uint64_t seed)
    : model_(std::move(model)), cost_(std::move(cost)), config_(std::move(config)), seed_(seed) {
  // With time-indexed parameters a per-step draw only moves the block it is
  // applied at, which the temporal average then scales down by (N - i) / S.
  config_.exploration = ExplorationMode::per_rollout;
  config_.validate();
  model_.validate();
  cost_.validate(model_.control_dim);
  const int m = model_.control_dim;
  if (initial_std.size() != m || (initial_std.array() <= 0.0).any()) {
    throw ConfigError("pi2_cma initial_std needs one positive entry per control channel");
  }
  const int np = config_.horizon * m;
  Vector var(np);
  for (int i = 0; i < config_.horizon; ++i) {
    var.segment(i * m, m) = initial_std.array().square().matrix();
  }
  initial_sigma_ = var.asDiagonal();
  params_ = time_indexed_policy(config_.horizon, m, 0.0, config_.dt);
  params_.sigma = initial_sigma_;
}

ControlStep Pi2CmaController::step(const Vector& observation, double time) {
  const int m = model_.control_dim;
  const int N = config_.horizon;
  // Features are indexed relative to the start of this plan.
  PolicyParams local = time_indexed_policy(N, m, time, config_.dt);
  local.theta = params_.theta;
  local.sigma = initial_sigma_;
  const std::uint64_t plan_seed = derive_seed(seed_, step_count_++);
  Pi2CmaStep solved = pi2_cma_iterate(model_, cost_, local, observation, time, config_, plan_seed);

  ControlStep out;
  out.control = solved.params.theta.head(m);
  model_.clamp(out.control);
  out.diagnostics = solved.diagnostics;
  out.cost_to_go = solved.diagnostics.free_energy;

  Vector shifted(N * m);
  for (int i = 0; i < N; ++i) {
    shifted.segment(i * m, m) = solved.params.theta.segment(std::min(i + 1, N - 1) * m, m);
  }
  params_.theta = shifted;
  return out;
}

}  // namespace pathint
