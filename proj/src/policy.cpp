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

#include "pathint/policy.hpp"

#include <fmt/format.h>

#include "pathint/weights.hpp"

namespace pathint {

void PolicyParams::validate(double covariance_floor) const {
  const int n = num_params();
  if (n < 1 || control_dim < 1) {
    throw ConfigError("policy needs at least one parameter and one control channel");
  }
  if (!theta.allFinite()) {
    throw ConfigError("policy parameters must be finite");
  }
  if (kind == PolicyKind::linear_feature && !features) {
    throw ConfigError("linear_feature policy requires a feature map");
  }
  if (kind == PolicyKind::nonlinear && !policy) {
    throw ConfigError("nonlinear policy requires a policy function");
  }
  if (sigma.rows() != n || sigma.cols() != n) {
    throw ConfigError(fmt::format("policy covariance must be {0}x{0}", n));
  }
  if (!sigma.isApprox(sigma.transpose(), 1e-12) && sigma.norm() > 0.0) {
    throw ConfigError("policy covariance must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma, Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(smallest > 0.0) || smallest < covariance_floor * (1.0 - 1e-9)) {
    throw ConfigError(fmt::format("policy covariance minimum eigenvalue {} is below the floor {}",
                                  smallest, covariance_floor));
  }
}

void PolicyParams::evaluate(double t, ConstVectorRef x, ConstVectorRef params, VectorRef u,
                            Matrix& feature_scratch) const {
  if (kind == PolicyKind::linear_feature) {
    features(t, x, feature_scratch);
    u.noalias() = feature_scratch.transpose() * params;
  } else {
    policy(t, x, params, u);
  }
}

Vector PolicyParams::evaluate(double t, const Vector& x, const Vector& params) const {
  Vector u = Vector::Zero(control_dim);
  Matrix scratch(num_params(), control_dim);
  evaluate(t, x, params, u, scratch);
  return u;
}

Matrix PolicyParams::policy_jacobian(double t, const Vector& x, const Vector& params,
                                     double step) const {
  const int n = num_params();
  Matrix jac = Matrix::Zero(control_dim, n);
  if (kind == PolicyKind::linear_feature) {
    Matrix h(n, control_dim);
    features(t, x, h);
    return h.transpose();
  }
  if (jacobian) {
    jacobian(t, x, params, jac);
    return jac;
  }
  Vector plus = params;
  Vector minus = params;
  for (int p = 0; p < n; ++p) {
    plus[p] = params[p] + step;
    minus[p] = params[p] - step;
    jac.col(p) = (evaluate(t, x, plus) - evaluate(t, x, minus)) / (2.0 * step);
    plus[p] = params[p];
    minus[p] = params[p];
  }
  return jac;
}

PolicyParams make_linear_policy(int num_params, int control_dim,
                                std::function<void(double, ConstVectorRef, MatrixRef)> features,
                                Vector theta, Matrix sigma) {
  PolicyParams p;
  p.kind = PolicyKind::linear_feature;
  p.control_dim = control_dim;
  p.features = std::move(features);
  p.theta = std::move(theta);
  p.sigma = std::move(sigma);
  if (p.theta.size() != num_params) {
    throw ConfigError("theta size does not match num_params");
  }
  return p;
}

Matrix floor_covariance(const Matrix& sigma, double floor, bool* repaired) {
  const Matrix sym = 0.5 * (sigma + sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  Vector values = eig.eigenvalues();
  bool raised = false;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!(values[i] >= floor)) {
      values[i] = floor;
      raised = true;
    }
  }
  if (repaired != nullptr) {
    *repaired = raised;
  }
  if (!raised) {
    return sym;
  }
  const Matrix& vecs = eig.eigenvectors();
  Matrix out = vecs * values.asDiagonal() * vecs.transpose();
  return 0.5 * (out + out.transpose());
}

Matrix pseudo_inverse(const Matrix& a, double relative_tolerance) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  Matrix inv = Matrix::Zero(a.cols(), a.rows());
  if (s.size() == 0 || s[0] <= 0.0) {
    return inv;
  }
  const double cutoff = relative_tolerance * s[0];
  Vector s_inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) {
      s_inv[i] = 1.0 / s[i];
    }
  }
  return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().transpose();
}

namespace {

void check_update_inputs(const PolicyParams& params, const RowMatrix& perturbations,
                         const Vector& costs) {
  if (perturbations.cols() != params.num_params()) {
    throw ConfigError(fmt::format("perturbations have {} columns, policy has {} parameters",
                                  perturbations.cols(), params.num_params()));
  }
  if (perturbations.rows() != costs.size() || costs.size() < 1) {
    throw ConfigError("need one cost per perturbation and at least one perturbation");
  }
}

}  // namespace

PolicyParams linear_policy_update(const PolicyParams& params, const RowMatrix& perturbations,
                                  const Vector& costs, double lambda) {
  if (params.kind != PolicyKind::linear_feature) {
    throw ConfigError("linear_policy_update requires a linear_feature policy");
  }
  check_update_inputs(params, perturbations, costs);
  const WeightVector w = softmax_weights(costs, lambda);
  PolicyParams out = params;
  out.theta += perturbations.transpose() * w.weights;
  return out;
}

PolicyParams nonlinear_policy_update(const PolicyParams& params, const RowMatrix& perturbations,
                                     const Vector& costs, double lambda, double t, const Vector& x) {
  if (params.kind != PolicyKind::nonlinear) {
    throw ConfigError("nonlinear_policy_update requires a nonlinear policy");
  }
  check_update_inputs(params, perturbations, costs);
  const WeightVector w = softmax_weights(costs, lambda);
  PolicyParams out = params;
  const Matrix base_jacobian = params.policy_jacobian(t, x, params.theta);
  if (base_jacobian.norm() == 0.0) {
    warn("policy Jacobian is zero at theta; nonlinear update falls back to the linear rule");
    out.theta += perturbations.transpose() * w.weights;
    return out;
  }
  const Matrix pinv = pseudo_inverse(base_jacobian);
  Vector step = Vector::Zero(params.num_params());
  for (Eigen::Index k = 0; k < perturbations.rows(); ++k) {
    const Vector delta = perturbations.row(k).transpose();
    const Matrix shifted = params.policy_jacobian(t, x, params.theta + delta);
    step += w.weights[k] * (pinv * (shifted * delta));
  }
  out.theta += step;
  return out;
}

}  // namespace pathint
