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

#ifndef PATHINT_WEIGHTS_HPP_
#define PATHINT_WEIGHTS_HPP_

#include <vector>

#include "pathint/core.hpp"

namespace pathint {

/// Normalized exponential weights w_k ∝ exp(-G_k / lambda).
struct WeightVector {
  Vector weights;
  double temperature = 1.0;
  /// log of the mean of exp(-G/lambda), i.e. the desirability estimate.
  double log_normalizer = 0.0;
  /// -lambda * log_normalizer, the free-energy (value) estimate.
  double free_energy = 0.0;
};

struct SamplingDiagnostics {
  int num_samples = 0;
  double ess = 0.0;
  double weight_entropy = 0.0;
  double max_weight = 0.0;
  double free_energy = 0.0;
  double cost_mean = 0.0;
  double cost_min = 0.0;
  double cost_std = 0.0;
};

/// Weights from costs, computed as exp(-(G - min G) / lambda) so that nothing
/// overflows. Non-finite costs get weight 0; if no cost is finite a
/// DegenerateBatch is thrown.
WeightVector softmax_weights(const Eigen::Ref<const Vector>& costs, double lambda);

/// 1 / sum(w^2), evaluated on max-normalized weights so the uniform and one-hot
/// cases come out exact. Clamped to [1, K].
double effective_sample_size(const WeightVector& w);
double effective_sample_size(const Eigen::Ref<const Vector>& weights);

/// -sum w log w, with 0 log 0 = 0.
double weight_entropy(const Eigen::Ref<const Vector>& weights);

/// Index of the largest weight; ties go to the lowest index.
int argmax_weight(const Eigen::Ref<const Vector>& weights);

/// ESS, entropy and cost statistics for one batch. Non-finite costs are left out
/// of the cost moments.
SamplingDiagnostics diagnose(const Eigen::Ref<const Vector>& costs, const WeightVector& w);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean and standard error (sample std / sqrt(K)). Needs K >= 2.
McEstimate mc_estimate(const Eigen::Ref<const Vector>& values);

/// (1/K) sum l(X_i) dQ/dP(X_i).
double is_estimate(const Eigen::Ref<const Vector>& values,
                   const Eigen::Ref<const Vector>& rn_derivative);

enum class MisScheme { flat, balance_heuristic };

/// Samples drawn from one proposal P^j.
struct SampleGroup {
  /// l(X_i^j).
  Vector values;
  /// dQ/dP^j (X_i^j).
  Vector rn_derivatives;
  /// Row i holds (dP^k / dP^j)(X_i^j) for k = 0..N_p-1. Only needed for the
  /// balance heuristic; column j must be 1.
  Matrix cross_densities;
};

struct MisResult {
  double estimate = 0.0;
  /// Stratified standard error, sqrt(sum_j N_j var_j) / N.
  double std_error = 0.0;
  /// Largest |(1/N) sum_j N_j gamma^j(X) - 1| seen over samples with l != 0.
  double max_condition_error = 0.0;
};

/// Pooled multiple-importance-sampling estimate with flat (gamma = 1) or
/// balance-heuristic reweighting gamma^j = N / sum_k N_k dP^k/dP^j. The
/// unbiasedness condition is checked at every sample with l != 0 and an
/// InvalidScheme is thrown if it is off by more than `condition_tolerance`.
MisResult mis_estimate(const std::vector<SampleGroup>& groups, MisScheme scheme,
                       double condition_tolerance = 1e-9);

/// log of the path importance weight dP*/dP^u:
///   -sum_i (1/2 |u_i|^2 dt + u_i' dW_i) - G0 / lambda.
/// `brownian_increments` holds dW_i, row by row like `controls`.
double importance_weight_path(const Eigen::Ref<const RowMatrix>& controls,
                              const Eigen::Ref<const RowMatrix>& brownian_increments,
                              double state_cost, double lambda, double dt);

}  // namespace pathint

#endif  // PATHINT_WEIGHTS_HPP_
