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

#include <gtest/gtest.h>

#include <cmath>

#include "pathint/models/lq.hpp"
#include "pathint/pi2_cma.hpp"
#include "pathint/rng.hpp"
#include "test_models_util.hpp"

namespace pathint {
namespace {

using testing::WarningCapture;

PolicyParams gain_policy(double theta, double variance) {
  return make_linear_policy(
      1, 1, [](double, ConstVectorRef x, MatrixRef h) { h(0, 0) = x[0]; }, Vector::Constant(1, theta),
      Matrix::Constant(1, 1, variance));
}

PolicyParams affine_policy(Vector theta) {
  return make_linear_policy(
      2, 1,
      [](double, ConstVectorRef x, MatrixRef h) {
        h(0, 0) = x[0];
        h(1, 0) = 1.0;
      },
      std::move(theta), Matrix::Identity(2, 2) * 0.25);
}

Pi2CmaConfig lq_config(int samples) {
  Pi2CmaConfig c;
  c.num_samples = samples;
  c.horizon = 20;
  c.dt = 0.05;
  c.num_threads = 1;
  return c;
}

TEST(TemporalWeights, ThreeStepExample) {
  const Vector w = temporal_weights(3);
  EXPECT_DOUBLE_EQ(w[0], 0.5);
  EXPECT_DOUBLE_EQ(w[1], 1.0 / 3.0);
  EXPECT_NEAR(w[2], 1.0 / 6.0, 1e-16);
}

TEST(TemporalWeights, SumToOneExactlyAndDecrease) {
  for (int n : {1, 2, 7, 40, 50, 100, 333, 1000}) {
    const Vector w = temporal_weights(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += w[i];
    }
    EXPECT_EQ(sum, 1.0) << "N=" << n;
    for (int i = 1; i + 1 < n; ++i) {
      EXPECT_LT(w[i], w[i - 1]);
    }
  }
  EXPECT_THROW(temporal_weights(0), ConfigError);
}

TEST(Pi2CmaIterate, WeightRowsSumToOne) {
  LqParams p;
  const auto step = pi2_cma_iterate(make_lq_model(p), make_lq_cost(p), affine_policy(Vector::Zero(2)),
                                    Vector::Ones(1), 0.0, lq_config(24), 3);
  ASSERT_EQ(step.weights.rows(), 20);
  ASSERT_EQ(step.weights.cols(), 24);
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(step.weights.row(i).sum(), 1.0, 1e-12);
  }
  EXPECT_EQ(step.total_costs.size(), 24);
}

TEST(Pi2CmaIterate, SingleRolloutAdoptsItsSample) {
  LqParams p;
  auto config = lq_config(1);
  config.exploration = ExplorationMode::per_rollout;
  config.adapt_covariance = false;
  const auto params = affine_policy(Vector{{-0.5, 0.1}});
  const auto step =
      pi2_cma_iterate(make_lq_model(p), make_lq_cost(p), params, Vector::Ones(1), 0.0, config, 17);
  std::vector<double> xi(2);
  fill_standard_normals(17, 0, 0, streams::kParameterSamples, xi);
  const Matrix chol = params.sigma.llt().matrixL();
  const Vector sample = params.theta + chol * Eigen::Map<Vector>(xi.data(), 2);
  EXPECT_LT((step.params.theta - sample).norm(), 1e-14);
  EXPECT_EQ(step.params.sigma, params.sigma);
}

TEST(Pi2CmaIterate, SingleRolloutPerStepAveragesItsStream) {
  LqParams p;
  auto config = lq_config(1);
  config.adapt_covariance = false;
  const auto params = gain_policy(-0.5, 0.04);
  const auto step =
      pi2_cma_iterate(make_lq_model(p), make_lq_cost(p), params, Vector::Ones(1), 0.0, config, 5);
  const Vector tw = temporal_weights(20);
  double expected = 0.0;
  std::vector<double> xi(1);
  for (int i = 0; i < 20; ++i) {
    fill_standard_normals(5, 0, static_cast<std::uint32_t>(i), streams::kParameterSamples, xi);
    expected += tw[i] * (-0.5 + 0.2 * xi[0]);
  }
  EXPECT_NEAR(step.params.theta[0], expected, 1e-14);
}

TEST(Pi2CmaIterate, CollapsedCovarianceIsRepairedWithWarning) {
  WarningCapture capture;
  LqParams p;
  auto config = lq_config(1);
  config.exploration = ExplorationMode::per_rollout;
  config.covariance_floor = 1e-4;
  const auto step = pi2_cma_iterate(make_lq_model(p), make_lq_cost(p), affine_policy(Vector::Zero(2)),
                                    Vector::Ones(1), 0.0, config, 8);
  EXPECT_TRUE(step.covariance_repaired);
  ASSERT_FALSE(capture.messages.empty());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(step.params.sigma);
  EXPECT_GE(eig.eigenvalues().minCoeff(), 1e-4 * (1.0 - 1e-9));
  EXPECT_EQ(step.params.sigma, step.params.sigma.transpose());
}

TEST(Pi2CmaIterate, CenteringFlagChangesCovarianceOnly) {
  LqParams p;
  auto config = lq_config(16);
  const auto params = affine_policy(Vector{{-1.0, 0.0}});
  const auto literal =
      pi2_cma_iterate(make_lq_model(p), make_lq_cost(p), params, Vector::Ones(1), 0.0, config, 2);
  config.centering = CovarianceCentering::weighted_mean;
  const auto cma =
      pi2_cma_iterate(make_lq_model(p), make_lq_cost(p), params, Vector::Ones(1), 0.0, config, 2);
  EXPECT_EQ(literal.params.theta, cma.params.theta);
  EXPECT_NE(literal.params.sigma, cma.params.sigma);
  // Scatter around the old mean dominates scatter around each weighted mean.
  EXPECT_GE(literal.params.sigma.trace(), cma.params.sigma.trace());
}

TEST(Pi2CmaIterate, RejectsBadInputs) {
  LqParams p;
  auto config = lq_config(4);
  config.temperature = -1.0;
  EXPECT_THROW(pi2_cma_iterate(make_lq_model(p), make_lq_cost(p), gain_policy(0.0, 1.0),
                               Vector::Ones(1), 0.0, config, 1),
               ConfigError);
  EXPECT_THROW(pi2_cma_iterate(make_lq_model(p), make_lq_cost(p), gain_policy(0.0, -1.0),
                               Vector::Ones(1), 0.0, lq_config(4), 1),
               ConfigError);
}

TEST(Pi2CmaOptimize, LinearGainApproachesRiccatiCost) {
  LqParams p;
  Pi2CmaConfig config;
  config.num_samples = 16;
  config.horizon = 40;
  config.dt = 0.05;
  const auto history = pi2_cma_optimize(make_lq_model(p), make_lq_cost(p, ControlCostForm::girsanov),
                                        gain_policy(0.0, 1.0),
                                        [](int, std::uint64_t) { return Vector::Ones(1); }, 0.0,
                                        config, 200, 11);
  ASSERT_EQ(history.mean_costs.size(), 200u);
  const double cost = lq_closed_loop_cost(p, history.params.theta[0], 1.0, 40, 0.05);
  const double optimal = lq_analytic_oracle(40, 0.05, 1.0, 1.0).optimal_cost(1.0);
  EXPECT_LT((cost - optimal) / optimal, 0.15);
}

TEST(Pi2CmaOptimize, InitialStateSamplerSeesEachIteration) {
  LqParams p;
  std::vector<int> seen;
  pi2_cma_optimize(
      make_lq_model(p), make_lq_cost(p), gain_policy(0.0, 1.0),
      [&seen](int it, std::uint64_t) {
        seen.push_back(it);
        return Vector::Ones(1);
      },
      0.0, lq_config(4), 3, 1);
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 2}));
}

TEST(Pi2CmaController, DrivesScalarStateTowardOrigin) {
  LqParams p;
  Pi2CmaConfig config = lq_config(32);
  Pi2CmaController controller(make_lq_model(p), make_lq_cost(p), config, Vector::Ones(1), 4);
  double x = 1.0;
  for (int j = 0; j < 20; ++j) {
    const auto step = controller.step(Vector::Constant(1, x), 0.05 * j);
    ASSERT_TRUE(step.control.allFinite());
    x += step.control[0] * 0.05;
  }
  EXPECT_LT(std::abs(x), 0.8);
}

}  // namespace
}  // namespace pathint
