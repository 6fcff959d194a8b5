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

#ifndef PATHINT_CORE_HPP_
#define PATHINT_CORE_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pathint/errors.hpp"
#include "pathint/parallel.hpp"

namespace pathint {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VectorRef = Eigen::Ref<Vector>;
using ConstVectorRef = Eigen::Ref<const Vector>;
using MatrixRef = Eigen::Ref<Matrix>;

/// Control-affine SDE  dx = f(t,x) dt + g(t,x) (u dt + diag(sigma) dW).
///
/// The callables write into caller-owned buffers so the rollout engine can run
/// without allocating. They must be safe to call concurrently.
struct DynamicsModel {
  int state_dim = 0;
  int control_dim = 0;
  std::function<void(double t, ConstVectorRef x, VectorRef dxdt)> drift;
  std::function<void(double t, ConstVectorRef x, MatrixRef g)> input_matrix;
  /// Per-channel noise standard deviation, in units of control.
  Vector diffusion_scale;
  /// Optional box limits applied to the perturbed control. Empty means unbounded.
  Vector control_lower;
  Vector control_upper;

  void validate() const;
  bool has_control_limits() const { return control_lower.size() > 0; }
  void clamp(VectorRef u) const;
};

/// How the quadratic control cost is charged inside a rollout.
enum class ControlCostForm {
  /// 1/2 u~' R u~ dt on the perturbed control u~ = u + du.
  perturbed,
  /// 1/2 u' R u dt + u' R du dt: nominal control cost plus the stochastic
  /// cross term, the discretized form of the control-affine cost-to-go.
  girsanov,
};

struct CostModel {
  /// q(t, x) >= 0.
  std::function<double(double t, ConstVectorRef x)> running_state_cost;
  /// phi(x) >= 0.
  std::function<double(ConstVectorRef x)> terminal_cost;
  /// Symmetric positive semidefinite; the identity reproduces 1/2 u'u.
  Matrix control_weight;
  /// Weight on |u~_i - u~_{i-1}|^2 dt. Zero disables the term.
  double action_rate_weight = 0.0;
  ControlCostForm control_cost_form = ControlCostForm::perturbed;

  void validate(int control_dim) const;
};

/// Open-loop controls u_0 ... u_{N-1}, one row per step.
class ControlSequence {
 public:
  ControlSequence(int horizon, double dt, int control_dim);
  ControlSequence(double dt, RowMatrix controls);

  int horizon() const { return static_cast<int>(controls_.rows()); }
  int control_dim() const { return static_cast<int>(controls_.cols()); }
  double dt() const { return dt_; }

  /// Shape-preserving views; the horizon and dt never change.
  Eigen::Map<RowMatrix> values() { return {controls_.data(), controls_.rows(), controls_.cols()}; }
  Eigen::Map<const RowMatrix> values() const {
    return {controls_.data(), controls_.rows(), controls_.cols()};
  }
  Vector at(int i) const { return controls_.row(i).transpose(); }

 private:
  double dt_;
  RowMatrix controls_;
};

enum class NoiseDistribution { gaussian, normal_log_normal };

struct NoiseSpec {
  Vector scale;
  NoiseDistribution distribution = NoiseDistribution::gaussian;
  /// Parameters of eta in du = sigma * xi * exp(eta) for the log-normal mixture.
  double log_normal_mean = 0.0;
  double log_normal_std = 0.5;
};

/// K x N x m control perturbations, stored rollout-major.
class NoiseSequence {
 public:
  NoiseSequence(int num_rollouts, int horizon, int control_dim,
                NoiseDistribution distribution = NoiseDistribution::gaussian);

  int num_rollouts() const { return num_rollouts_; }
  int horizon() const { return horizon_; }
  int control_dim() const { return control_dim_; }
  NoiseDistribution distribution() const { return distribution_; }

  Eigen::Map<const RowMatrix> rollout(int k) const {
    return {samples_.data() + offset(k), horizon_, control_dim_};
  }
  Eigen::Map<RowMatrix> rollout(int k) { return {samples_.data() + offset(k), horizon_, control_dim_}; }
  double operator()(int k, int i, int j) const { return samples_[offset(k) + i * control_dim_ + j]; }

 private:
  std::size_t offset(int k) const {
    return static_cast<std::size_t>(k) * static_cast<std::size_t>(horizon_ * control_dim_);
  }

  int num_rollouts_;
  int horizon_;
  int control_dim_;
  NoiseDistribution distribution_;
  std::vector<double> samples_;
};

/// Draws du_{i,k} = sigma * xi / sqrt(dt) so that g du dt realizes g sigma dW.
/// Sample (k, i, j) depends only on (seed, k, i, j).
NoiseSequence generate_noise(int num_rollouts, int horizon, double dt, const NoiseSpec& spec,
                             std::uint64_t seed);

/// Simulated paths, applied controls and backward costs-to-go of K rollouts.
class RolloutBatch {
 public:
  RolloutBatch(int num_rollouts, int horizon, int state_dim, int control_dim);

  int num_rollouts() const { return num_rollouts_; }
  int horizon() const { return horizon_; }
  int state_dim() const { return state_dim_; }
  int control_dim() const { return control_dim_; }

  /// (N+1) x n states of rollout k.
  Eigen::Map<const RowMatrix> trajectory(int k) const {
    return {trajectories_.data() + traj_offset(k), horizon_ + 1, state_dim_};
  }
  Eigen::Map<RowMatrix> trajectory(int k) {
    return {trajectories_.data() + traj_offset(k), horizon_ + 1, state_dim_};
  }
  /// N x m perturbed (and clamped) controls of rollout k.
  Eigen::Map<const RowMatrix> controls(int k) const {
    return {controls_.data() + ctrl_offset(k), horizon_, control_dim_};
  }
  Eigen::Map<RowMatrix> controls(int k) {
    return {controls_.data() + ctrl_offset(k), horizon_, control_dim_};
  }

  /// G_{i,k} for i = 0..N-1, stored K x N.
  const RowMatrix& costs_to_go() const { return costs_to_go_; }
  RowMatrix& costs_to_go() { return costs_to_go_; }
  const RowMatrix& stage_costs() const { return stage_costs_; }
  RowMatrix& stage_costs() { return stage_costs_; }
  const Vector& terminal_costs() const { return terminal_costs_; }
  Vector& terminal_costs() { return terminal_costs_; }
  /// G_{0,k}.
  Vector total_costs() const { return costs_to_go_.col(0); }

  bool diverged(int k) const { return diverged_[static_cast<std::size_t>(k)] != 0; }
  void set_diverged(int k, bool value) { diverged_[static_cast<std::size_t>(k)] = value ? 1 : 0; }
  int num_diverged() const;

 private:
  std::size_t traj_offset(int k) const {
    return static_cast<std::size_t>(k) * static_cast<std::size_t>((horizon_ + 1) * state_dim_);
  }
  std::size_t ctrl_offset(int k) const {
    return static_cast<std::size_t>(k) * static_cast<std::size_t>(horizon_ * control_dim_);
  }

  int num_rollouts_;
  int horizon_;
  int state_dim_;
  int control_dim_;
  std::vector<double> trajectories_;
  std::vector<double> controls_;
  RowMatrix costs_to_go_;
  RowMatrix stage_costs_;
  Vector terminal_costs_;
  std::vector<char> diverged_;
};

struct RolloutOptions {
  /// Cost assigned to a rollout whose state or cost becomes non-finite.
  double divergence_cost = 1e9;
  /// u~_{-1} for the action-rate term at step 0. Without it the term starts at step 1.
  std::optional<Vector> previous_control;
  /// Overrides CostModel::action_rate_weight when set.
  std::optional<double> action_rate_weight;
  /// 0 selects one worker per hardware thread.
  int num_threads = 0;
};

/// x + (f(t,x) + g(t,x)(u + noise)) dt. Throws IntegrationDiverged on a non-finite result.
Vector euler_maruyama_step(const DynamicsModel& model, double t, const Vector& x, const Vector& u,
                           const Vector& noise, double dt);

/// Forward-simulates `noise.num_rollouts()` perturbations of `nominal` from x0 and
/// accumulates costs-to-go backwards along each path.
RolloutBatch rollout_batch(const DynamicsModel& model, const CostModel& cost,
                           const ControlSequence& nominal, const NoiseSequence& noise,
                           const Vector& x0, double t0, const RolloutOptions& options = {});

/// output[i] = input[min(i + 1, N - 1)].
ControlSequence shift_receding_horizon(const ControlSequence& seq);

namespace detail {

struct RolloutWorkspace {
  RolloutWorkspace(int state_dim, int control_dim)
      : x(state_dim), dxdt(state_dim), g(state_dim, control_dim), nominal(control_dim),
        perturbation(control_dim), applied(control_dim), previous(control_dim),
        scratch(control_dim) {}
  Vector x, dxdt;
  Matrix g;
  Vector nominal, perturbation, applied, previous, scratch;
};

/// In-place Euler step on ws.x with control ws.applied. Returns false if the
/// new state is not finite.
bool integrate_in_place(const DynamicsModel& model, double t, double dt, RolloutWorkspace& ws);

double control_cost(const CostModel& cost, const RolloutWorkspace& ws, double dt);

void check_rollout_inputs(const DynamicsModel& model, const CostModel& cost, int num_rollouts,
                          int horizon, double dt, const Vector& x0);

void finish_rollout(RolloutBatch& batch, int k, bool ok, double terminal, double divergence_cost,
                    int steps_done);

}  // namespace detail

/// Generic batched rollout. `control(k, i, t, x, nominal, perturbation)` fills the
/// nominal control and its perturbation for step i of rollout k (both start at
/// zero); the engine applies u~ = clamp(nominal + perturbation).
///
/// Rollouts are evaluated in disjoint chunks on worker threads; each rollout's
/// arithmetic is independent of the schedule, so the batch is bit-reproducible.
template <class ControlFn>
RolloutBatch simulate_rollouts(const DynamicsModel& model, const CostModel& cost, int num_rollouts,
                               int horizon, double dt, const Vector& x0, double t0,
                               ControlFn&& control, const RolloutOptions& options = {}) {
  detail::check_rollout_inputs(model, cost, num_rollouts, horizon, dt, x0);
  RolloutBatch batch(num_rollouts, horizon, model.state_dim, model.control_dim);
  const double rate_weight = options.action_rate_weight.value_or(cost.action_rate_weight);

  parallel_for(num_rollouts, options.num_threads, [&](int begin, int end) {
    detail::RolloutWorkspace ws(model.state_dim, model.control_dim);
    for (int k = begin; k < end; ++k) {
      auto path = batch.trajectory(k);
      auto applied_controls = batch.controls(k);
      path.row(0) = x0.transpose();
      ws.x = x0;
      bool has_previous = options.previous_control.has_value();
      if (has_previous) {
        ws.previous = *options.previous_control;
      }
      double t = t0;
      bool ok = true;
      int step = 0;
      for (; step < horizon; ++step) {
        ws.nominal.setZero();
        ws.perturbation.setZero();
        control(k, step, t, ConstVectorRef(ws.x), VectorRef(ws.nominal), VectorRef(ws.perturbation));
        ws.applied = ws.nominal + ws.perturbation;
        model.clamp(ws.applied);

        double stage = cost.running_state_cost(t, ws.x) * dt + detail::control_cost(cost, ws, dt);
        if (rate_weight > 0.0 && has_previous) {
          stage += rate_weight * (ws.applied - ws.previous).squaredNorm() * dt;
        }
        applied_controls.row(step) = ws.applied.transpose();
        if (!std::isfinite(stage) || !detail::integrate_in_place(model, t, dt, ws)) {
          ok = false;
          break;
        }
        batch.stage_costs()(k, step) = stage;
        path.row(step + 1) = ws.x.transpose();
        ws.previous = ws.applied;
        has_previous = true;
        t += dt;
      }
      const double terminal = ok ? cost.terminal_cost(ws.x) : 0.0;
      detail::finish_rollout(batch, k, ok && std::isfinite(terminal), terminal,
                             options.divergence_cost, step);
    }
  });
  return batch;
}

}  // namespace pathint

#endif  // PATHINT_CORE_HPP_
