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

#include "pathint/core.hpp"

#include <fmt/format.h>

#include <iostream>
#include <mutex>

#include "pathint/rng.hpp"

namespace pathint {

namespace {

std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& warning_handler() {
  static WarningHandler handler = [](std::string_view message) {
    std::clog << "[pathint] warning: " << message << '\n';
  };
  return handler;
}

}  // namespace

void set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(warning_mutex());
  warning_handler() = std::move(handler);
}

void warn(std::string_view message) {
  std::lock_guard lock(warning_mutex());
  if (warning_handler()) {
    warning_handler()(message);
  }
}

void DynamicsModel::validate() const {
  if (state_dim <= 0 || control_dim <= 0) {
    throw ConfigError(fmt::format("dynamics model dimensions must be positive (state {}, control {})",
                                  state_dim, control_dim));
  }
  if (!drift || !input_matrix) {
    throw ConfigError("dynamics model requires drift and input_matrix callables");
  }
  if (diffusion_scale.size() != control_dim) {
    throw ConfigError(fmt::format("diffusion_scale has {} entries, expected {}",
                                  diffusion_scale.size(), control_dim));
  }
  if ((diffusion_scale.array() < 0.0).any() || !diffusion_scale.allFinite()) {
    throw ConfigError("diffusion_scale entries must be finite and non-negative");
  }
  if (control_lower.size() != control_upper.size() ||
      (control_lower.size() != 0 && control_lower.size() != control_dim)) {
    throw ConfigError("control limits must both be empty or both have control_dim entries");
  }
  if (control_lower.size() > 0 && (control_lower.array() > control_upper.array()).any()) {
    throw ConfigError("control_lower exceeds control_upper");
  }
}

void DynamicsModel::clamp(VectorRef u) const {
  if (has_control_limits()) {
    u = u.cwiseMax(control_lower).cwiseMin(control_upper);
  }
}

void CostModel::validate(int control_dim) const {
  if (!running_state_cost || !terminal_cost) {
    throw ConfigError("cost model requires running_state_cost and terminal_cost callables");
  }
  if (control_weight.rows() != control_dim || control_weight.cols() != control_dim) {
    throw ConfigError(fmt::format("control_weight must be {0}x{0}, got {1}x{2}", control_dim,
                                  control_weight.rows(), control_weight.cols()));
  }
  if (!control_weight.isApprox(control_weight.transpose(), 1e-12) && control_weight.norm() > 0.0) {
    throw ConfigError("control_weight must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(control_weight, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, control_weight.norm())) {
    throw ConfigError("control_weight must be positive semidefinite");
  }
  if (!(action_rate_weight >= 0.0)) {
    throw ConfigError("action_rate_weight must be non-negative");
  }
}

ControlSequence::ControlSequence(int horizon, double dt, int control_dim)
    : ControlSequence(dt, RowMatrix::Zero(horizon, control_dim)) {}

ControlSequence::ControlSequence(double dt, RowMatrix controls) : dt_(dt), controls_(std::move(controls)) {
  if (controls_.rows() < 1 || controls_.cols() < 1) {
    throw ConfigError("control sequence needs a positive horizon and control dimension");
  }
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw ConfigError(fmt::format("control sequence dt must be positive, got {}", dt_));
  }
  if (!controls_.allFinite()) {
    throw ConfigError("control sequence entries must be finite");
  }
}

NoiseSequence::NoiseSequence(int num_rollouts, int horizon, int control_dim,
                             NoiseDistribution distribution)
    : num_rollouts_(num_rollouts),
      horizon_(horizon),
      control_dim_(control_dim),
      distribution_(distribution) {
  if (num_rollouts < 1 || horizon < 1 || control_dim < 1) {
    throw ConfigError("noise sequence dimensions must be positive");
  }
  samples_.assign(static_cast<std::size_t>(num_rollouts) * horizon * control_dim, 0.0);
}

NoiseSequence generate_noise(int num_rollouts, int horizon, double dt, const NoiseSpec& spec,
                             std::uint64_t seed) {
  const int m = static_cast<int>(spec.scale.size());
  if (m < 1) {
    throw ConfigError("noise scale must have at least one channel");
  }
  if (!(dt > 0.0)) {
    throw ConfigError("noise dt must be positive");
  }
  if ((spec.scale.array() < 0.0).any()) {
    throw ConfigError("noise scale entries must be non-negative");
  }
  NoiseSequence noise(num_rollouts, horizon, m, spec.distribution);
  const double inv_sqrt_dt = 1.0 / std::sqrt(dt);
  const bool mixture = spec.distribution == NoiseDistribution::normal_log_normal;
  // exp(eta) / exp(mu + s^2) has unit second moment, so the mixture keeps the
  // gaussian per-channel variance.
  const double mixture_norm =
      std::exp(-spec.log_normal_mean - spec.log_normal_std * spec.log_normal_std);
  std::vector<double> xi(static_cast<std::size_t>(m));
  std::vector<double> eta(static_cast<std::size_t>(m));
  for (int k = 0; k < num_rollouts; ++k) {
    auto rows = noise.rollout(k);
    for (int i = 0; i < horizon; ++i) {
      fill_standard_normals(seed, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(i),
                            streams::kControlNoise, xi);
      if (mixture) {
        fill_standard_normals(seed, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(i),
                              streams::kLogNormalMix, eta);
      }
      for (int j = 0; j < m; ++j) {
        double sample = spec.scale[j] * xi[static_cast<std::size_t>(j)] * inv_sqrt_dt;
        if (mixture) {
          const double log_scale =
              spec.log_normal_mean + spec.log_normal_std * eta[static_cast<std::size_t>(j)];
          sample *= std::exp(log_scale) * mixture_norm;
        }
        rows(i, j) = sample;
      }
    }
  }
  return noise;
}

RolloutBatch::RolloutBatch(int num_rollouts, int horizon, int state_dim, int control_dim)
    : num_rollouts_(num_rollouts),
      horizon_(horizon),
      state_dim_(state_dim),
      control_dim_(control_dim),
      trajectories_(static_cast<std::size_t>(num_rollouts) * (horizon + 1) * state_dim, 0.0),
      controls_(static_cast<std::size_t>(num_rollouts) * horizon * control_dim, 0.0),
      costs_to_go_(RowMatrix::Zero(num_rollouts, horizon)),
      stage_costs_(RowMatrix::Zero(num_rollouts, horizon)),
      terminal_costs_(Vector::Zero(num_rollouts)),
      diverged_(static_cast<std::size_t>(num_rollouts), 0) {}

int RolloutBatch::num_diverged() const {
  int count = 0;
  for (char d : diverged_) {
    count += d != 0 ? 1 : 0;
  }
  return count;
}

namespace detail {

bool integrate_in_place(const DynamicsModel& model, double t, double dt, RolloutWorkspace& ws) {
  model.drift(t, ws.x, ws.dxdt);
  model.input_matrix(t, ws.x, ws.g);
  // Plain loops: the dimensions are tiny and this runs once per rollout step.
  const Eigen::Index n = ws.x.size();
  const Eigen::Index m = ws.applied.size();
  bool finite = true;
  for (Eigen::Index r = 0; r < n; ++r) {
    double d = ws.dxdt[r];
    for (Eigen::Index c = 0; c < m; ++c) {
      d += ws.g(r, c) * ws.applied[c];
    }
    ws.x[r] += d * dt;
    finite = finite && std::isfinite(ws.x[r]);
  }
  return finite;
}

namespace {

double bilinear(const Matrix& R, const Vector& a, const Vector& b) {
  double total = 0.0;
  for (Eigen::Index c = 0; c < R.cols(); ++c) {
    double row = 0.0;
    for (Eigen::Index r = 0; r < R.rows(); ++r) {
      row += a[r] * R(r, c);
    }
    total += row * b[c];
  }
  return total;
}

}  // namespace

double control_cost(const CostModel& cost, const RolloutWorkspace& ws, double dt) {
  const Matrix& R = cost.control_weight;
  switch (cost.control_cost_form) {
    case ControlCostForm::girsanov: {
      const double nominal = 0.5 * bilinear(R, ws.nominal, ws.nominal);
      const double cross = bilinear(R, ws.nominal, ws.perturbation);
      return (nominal + cross) * dt;
    }
    case ControlCostForm::perturbed:
    default:
      return 0.5 * bilinear(R, ws.applied, ws.applied) * dt;
  }
}

void check_rollout_inputs(const DynamicsModel& model, const CostModel& cost, int num_rollouts,
                          int horizon, double dt, const Vector& x0) {
  model.validate();
  cost.validate(model.control_dim);
  if (num_rollouts < 1) {
    throw ConfigError("rollout count must be at least 1");
  }
  if (horizon < 1) {
    throw ConfigError("rollout horizon must be at least 1");
  }
  if (!(dt > 0.0)) {
    throw ConfigError("rollout dt must be positive");
  }
  if (x0.size() != model.state_dim) {
    throw ConfigError(fmt::format("initial state has {} entries, model expects {}", x0.size(),
                                  model.state_dim));
  }
  if (!x0.allFinite()) {
    throw ConfigError("initial state must be finite");
  }
}

void finish_rollout(RolloutBatch& batch, int k, bool ok, double terminal, double divergence_cost,
                    int steps_done) {
  const int horizon = batch.horizon();
  auto& stages = batch.stage_costs();
  auto& togo = batch.costs_to_go();
  if (!ok) {
    batch.set_diverged(k, true);
    auto path = batch.trajectory(k);
    const int last_finite = std::min(steps_done, horizon);
    for (int i = last_finite + 1; i <= horizon; ++i) {
      path.row(i) = path.row(last_finite);
    }
    stages.row(k).setZero();
    terminal = divergence_cost;
  }
  batch.terminal_costs()[k] = terminal;
  double acc = terminal;
  for (int i = horizon - 1; i >= 0; --i) {
    acc = acc + stages(k, i);
    togo(k, i) = acc;
  }
}

}  // namespace detail

Vector euler_maruyama_step(const DynamicsModel& model, double t, const Vector& x, const Vector& u,
                           const Vector& noise, double dt) {
  model.validate();
  if (!(dt > 0.0)) {
    throw ConfigError("integration dt must be positive");
  }
  if (x.size() != model.state_dim || u.size() != model.control_dim ||
      noise.size() != model.control_dim) {
    throw ConfigError("state, control or noise dimension does not match the model");
  }
  if (!x.allFinite() || !u.allFinite() || !noise.allFinite() || !std::isfinite(t)) {
    throw ConfigError("integration inputs must be finite");
  }
  detail::RolloutWorkspace ws(model.state_dim, model.control_dim);
  ws.x = x;
  ws.applied = u + noise;
  if (!detail::integrate_in_place(model, t, dt, ws)) {
    throw IntegrationDiverged(-1, 0, fmt::format("state became non-finite at t={}", t));
  }
  return ws.x;
}

RolloutBatch rollout_batch(const DynamicsModel& model, const CostModel& cost,
                           const ControlSequence& nominal, const NoiseSequence& noise,
                           const Vector& x0, double t0, const RolloutOptions& options) {
  if (noise.horizon() != nominal.horizon()) {
    throw ConfigError(fmt::format("noise horizon {} differs from nominal horizon {}",
                                  noise.horizon(), nominal.horizon()));
  }
  if (noise.control_dim() != model.control_dim || nominal.control_dim() != model.control_dim) {
    throw ConfigError("control dimension of nominal or noise does not match the model");
  }
  const auto u = nominal.values();
  return simulate_rollouts(
      model, cost, noise.num_rollouts(), nominal.horizon(), nominal.dt(), x0, t0,
      [&](int k, int i, double, ConstVectorRef, VectorRef base, VectorRef du) {
        base = u.row(i).transpose();
        du = noise.rollout(k).row(i).transpose();
      },
      options);
}

ControlSequence shift_receding_horizon(const ControlSequence& seq) {
  const int n = seq.horizon();
  RowMatrix shifted(n, seq.control_dim());
  const auto in = seq.values();
  for (int i = 0; i < n; ++i) {
    shifted.row(i) = in.row(std::min(i + 1, n - 1));
  }
  return ControlSequence(seq.dt(), std::move(shifted));
}

}  // namespace pathint
