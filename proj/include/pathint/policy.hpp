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

#ifndef PATHINT_POLICY_HPP_
#define PATHINT_POLICY_HPP_

#include <functional>

#include "pathint/core.hpp"

namespace pathint {

enum class PolicyKind { linear_feature, nonlinear };

/// Parameterized state feedback u = pi(t, x; theta) with exploration covariance.
struct PolicyParams {
  PolicyKind kind = PolicyKind::linear_feature;
  int control_dim = 1;
  Vector theta;
  /// Exploration covariance, n_p x n_p.
  Matrix sigma;
  /// linear_feature: h(t, x) as an n_p x m matrix, u = h' theta.
  std::function<void(double t, ConstVectorRef x, MatrixRef h)> features;
  /// nonlinear: u = pi(t, x; theta).
  std::function<void(double t, ConstVectorRef x, ConstVectorRef theta, VectorRef u)> policy;
  /// nonlinear, optional: d pi / d theta as an m x n_p matrix. Finite
  /// differences are used when absent.
  std::function<void(double t, ConstVectorRef x, ConstVectorRef theta, MatrixRef jacobian)>
      jacobian;

  int num_params() const { return static_cast<int>(theta.size()); }

  /// Checks shapes, callables, symmetry of sigma and its eigenvalue floor.
  void validate(double covariance_floor = 0.0) const;

  /// u = pi(t, x; params) into `u`; `feature_scratch` must be n_p x m for the linear kind.
  void evaluate(double t, ConstVectorRef x, ConstVectorRef params, VectorRef u,
                Matrix& feature_scratch) const;
  Vector evaluate(double t, const Vector& x, const Vector& params) const;

  /// Analytic Jacobian when available, otherwise central differences with `step`.
  Matrix policy_jacobian(double t, const Vector& x, const Vector& params, double step = 1e-6) const;
};

/// Linear-in-theta policy built from a feature map.
PolicyParams make_linear_policy(int num_params, int control_dim,
                                std::function<void(double, ConstVectorRef, MatrixRef)> features,
                                Vector theta, Matrix sigma);

/// Symmetrizes and lifts every eigenvalue to at least `floor`. `repaired` is set
/// when an eigenvalue had to be raised.
Matrix floor_covariance(const Matrix& sigma, double floor, bool* repaired = nullptr);

/// Moore-Penrose pseudoinverse via SVD; singular values below
/// relative_tolerance * sigma_max are treated as zero.
Matrix pseudo_inverse(const Matrix& a, double relative_tolerance = 1e-10);

/// theta <- theta + sum_k w_k dtheta_k with w = softmax(-costs / lambda).
/// `perturbations` is K x n_p.
PolicyParams linear_policy_update(const PolicyParams& params, const RowMatrix& perturbations,
                                  const Vector& costs, double lambda);

/// theta <- theta + sum_k w~_k dtheta_k with
/// w~_k = w_k [d pi(theta)]^+ [d pi(theta + dtheta_k)], evaluated at (t, x).
/// A zero Jacobian at theta falls back to the linear rule with a warning.
PolicyParams nonlinear_policy_update(const PolicyParams& params, const RowMatrix& perturbations,
                                     const Vector& costs, double lambda, double t, const Vector& x);

}  // namespace pathint

#endif  // PATHINT_POLICY_HPP_
