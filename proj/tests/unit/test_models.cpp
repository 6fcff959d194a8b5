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
#include <filesystem>
#include <fstream>
#include <numbers>

#include "pathint/models/bicycle.hpp"
#include "pathint/models/cartpole.hpp"
#include "pathint/models/lq.hpp"
#include "pathint/rng.hpp"

namespace pathint {
namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
Vector rk4(F&& f, Vector x, double dt, int steps) {
  for (int s = 0; s < steps; ++s) {
    const Vector k1 = f(x);
    const Vector k2 = f(x + 0.5 * dt * k1);
    const Vector k3 = f(x + 0.5 * dt * k2);
    const Vector k4 = f(x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

Vector uniform_box(std::uint64_t seed, std::uint32_t row, const Vector& half_widths) {
  std::vector<double> u(static_cast<std::size_t>(half_widths.size()));
  fill_uniforms(seed, row, 0, streams::kEstimators, u);
  Vector out(half_widths.size());
  for (Eigen::Index i = 0; i < half_widths.size(); ++i) {
    out[i] = (2.0 * u[static_cast<std::size_t>(i)] - 1.0) * half_widths[i];
  }
  return out;
}

// Cart-pole

TEST(CartPole, EquilibriaHaveZeroDerivative) {
  const CartPoleParams p;
  EXPECT_EQ(cartpole_dynamics(p, Vector::Zero(4), 0.0), Vector::Zero(4));
  const Vector hanging{{0.0, 0.0, kPi, 0.0}};
  const Vector d = cartpole_dynamics(p, hanging, 0.0);
  // sin(pi) is not exactly zero in floating point.
  EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(CartPole, ForceIsClamped) {
  const CartPoleParams p;
  const Vector x{{0.3, 0.1, 0.5, -0.2}};
  EXPECT_EQ(cartpole_dynamics(p, x, 1e3), cartpole_dynamics(p, x, p.force_limit));
  EXPECT_EQ(cartpole_dynamics(p, x, -1e3), cartpole_dynamics(p, x, -p.force_limit));
}

TEST(CartPole, ControlAffineModelMatchesDynamics) {
  const CartPoleParams p;
  const auto model = make_cartpole_model(p);
  Vector f(4);
  Matrix g(4, 1);
  for (std::uint32_t r = 0; r < 200; ++r) {
    const Vector x = uniform_box(3, r, Vector{{2.0, 3.0, 4.0, 6.0}});
    const double force = 9.0 * std::sin(static_cast<double>(r));
    model.drift(0.0, x, f);
    model.input_matrix(0.0, x, g);
    const Vector combined = f + g.col(0) * force;
    EXPECT_LT((combined - cartpole_dynamics(p, x, force)).norm(), 1e-12);
  }
}

TEST(CartPole, FullSystemEnergyConservedWithoutForce) {
  const CartPoleParams p;
  const Vector x0{{0.0, 0.4, 2.0, -1.0}};
  const double e0 = cartpole_energy(p, x0);
  const Vector x1 = rk4([&](const Vector& x) { return cartpole_dynamics(p, x, 0.0); }, x0, 1e-4, 10000);
  EXPECT_LT(std::abs(cartpole_energy(p, x1) - e0), 1e-3 * std::abs(e0));
}

TEST(CartPole, PoleOnlyEnergyConservedWithPinnedCart) {
  CartPoleParams p;
  p.cart_mass = 1e12;
  const Vector x0{{0.0, 0.0, 1.2, 0.5}};
  const auto pole_energy = [&](const Vector& x) {
    const double l = p.pole_half_length;
    return (2.0 / 3.0) * p.pole_mass * l * l * x[3] * x[3] + p.pole_mass * p.gravity * l * std::cos(x[2]);
  };
  const Vector x1 = rk4([&](const Vector& x) { return cartpole_dynamics(p, x, 0.0); }, x0, 1e-4, 10000);
  EXPECT_LT(std::abs(pole_energy(x1) - pole_energy(x0)), 1e-3 * std::abs(pole_energy(x0)));
  EXPECT_LT(std::abs(x1[0]), 1e-9);
}

TEST(CartPole, MirrorSymmetryIsExact) {
  const CartPoleParams p;
  for (std::uint32_t r = 0; r < 1000; ++r) {
    const Vector x = uniform_box(4, r, Vector{{3.0, 5.0, 7.0, 10.0, 15.0}});
    const Vector state = x.head(4);
    const double force = x[4];
    EXPECT_EQ(cartpole_dynamics(p, -state, -force), -cartpole_dynamics(p, state, force));
  }
}

TEST(CartPole, FuzzedStatesGiveFiniteDerivatives) {
  const CartPoleParams p;
  const Vector box{{5.0, 20.0, 4.0 * kPi, 40.0, 20.0}};
  for (std::uint32_t r = 0; r < 100000; ++r) {
    const Vector x = uniform_box(5, r, box);
    ASSERT_TRUE(cartpole_dynamics(p, x.head(4), x[4]).allFinite()) << "row " << r;
  }
}

TEST(CartPole, WrapAngleRange) {
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3.0 * kPi / 2.0), -kPi / 2.0, 1e-15);
  EXPECT_NEAR(wrap_angle(-7.0), -7.0 + 2.0 * kPi, 1e-15);
  EXPECT_EQ(wrap_angle(0.25), 0.25);
}

TEST(CartPole, CostIsQuadraticInWrappedState) {
  const CartPoleCostWeights w;
  const auto cost = make_cartpole_cost(w);
  const Vector x{{0.5, -1.0, 2.0 * kPi + 0.3, 2.0}};
  const double expected =
      w.position * 0.25 + w.velocity * 1.0 + w.angle * 0.09 + w.angular_velocity * 4.0;
  EXPECT_NEAR(cost.running_state_cost(0.0, x), expected, 1e-12);
  EXPECT_EQ(cost.running_state_cost(0.0, Vector::Zero(4)), 0.0);
  EXPECT_EQ(cost.terminal_cost(x), 0.0);
  EXPECT_EQ(cost.control_weight(0, 0), w.control);
}

TEST(CartPole, SwingupSuccessDefinition) {
  std::vector<double> times;
  std::vector<double> angles;
  for (int j = 0; j < 500; ++j) {
    times.push_back(0.02 * j);
    angles.push_back(j < 350 ? 3.0 : 0.05);
  }
  EXPECT_TRUE(cartpole_swingup_success(times, angles, 10.0));
  angles[499] = 0.1;
  EXPECT_FALSE(cartpole_swingup_success(times, angles, 10.0));
  angles[499] = 2.0 * kPi + 0.01;
  EXPECT_TRUE(cartpole_swingup_success(times, angles, 10.0));
  angles[400] = -0.2;
  EXPECT_FALSE(cartpole_swingup_success(times, angles, 10.0));
  EXPECT_FALSE(cartpole_swingup_success({}, {}, 10.0));
}

TEST(CartPole, InvalidParametersRejected) {
  CartPoleParams p;
  p.pole_mass = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = CartPoleParams{};
  p.force_limit = -1.0;
  EXPECT_THROW(make_cartpole_model(p), ConfigError);
}

// Bicycle

TEST(Bicycle, RotationInPlace) {
  const BicycleParams p;
  const Vector d = bicycle_kinematics(p, Vector{{1.0, 2.0, 0.7}}, Vector{{0.0, 0.8}});
  EXPECT_EQ(d, Vector({{0.0, 0.0, 0.8}}));
}

TEST(Bicycle, StraightLine) {
  const BicycleParams p;
  EXPECT_EQ(bicycle_kinematics(p, Vector::Zero(3), Vector{{1.0, 0.0}}), Vector({{1.0, 0.0, 0.0}}));
}

TEST(Bicycle, ControlsAreClamped) {
  const BicycleParams p;
  const Vector d = bicycle_kinematics(p, Vector::Zero(3), Vector{{5.0, -9.0}});
  EXPECT_EQ(d, Vector({{p.max_speed, 0.0, -p.max_turn_rate}}));
  EXPECT_EQ(bicycle_kinematics(p, Vector::Zero(3), Vector{{-1.0, 0.0}})[0], p.min_speed);
}

TEST(Bicycle, ConstantTurnTracesCircle) {
  const BicycleParams p;
  const double v = 1.2;
  const double w = 0.8;
  const double period = 2.0 * kPi / w;
  const int steps = 20000;
  const double dt = period / steps;
  const auto f = [&](const Vector& x) { return bicycle_kinematics(p, x, Vector{{v, w}}); };
  Vector x = Vector::Zero(3);
  const double radius = v / w;
  for (int q = 1; q <= 4; ++q) {
    x = rk4(f, x, dt, steps / 4);
    const double t = q * period / 4.0;
    EXPECT_NEAR(x[0], radius * std::sin(w * t), 1e-4);
    EXPECT_NEAR(x[1], radius * (1.0 - std::cos(w * t)), 1e-4);
  }
  EXPECT_NEAR(x[0], 0.0, 1e-4);
  EXPECT_NEAR(x[1], 0.0, 1e-4);
}

TEST(Bicycle, KinematicVariantUsesSteeringAngle) {
  BicycleParams p;
  p.variant = BicycleVariant::kinematic_bicycle;
  const Vector d = bicycle_kinematics(p, Vector{{0.0, 0.0, 0.0, 0.3}}, Vector{{1.0, 0.5}});
  EXPECT_NEAR(d[2], std::tan(0.3) / p.wheelbase, 1e-15);
  EXPECT_EQ(d[3], 0.5);
  const Vector saturated = bicycle_kinematics(p, Vector{{0.0, 0.0, 0.0, 2.0}}, Vector{{1.0, 0.0}});
  EXPECT_NEAR(saturated[2], std::tan(p.max_steering) / p.wheelbase, 1e-15);
  EXPECT_EQ(make_bicycle_model(p).state_dim, 4);
}

TEST(Bicycle, ModelMatchesKinematicsInsideLimits) {
  const BicycleParams p;
  const auto model = make_bicycle_model(p);
  Vector f(3);
  Matrix g(3, 2);
  for (std::uint32_t r = 0; r < 200; ++r) {
    const Vector x = uniform_box(6, r, Vector{{10.0, 10.0, 4.0}});
    const Vector u{{1.0 + std::sin(static_cast<double>(r)), 1.5 * std::cos(static_cast<double>(r))}};
    model.drift(0.0, x, f);
    model.input_matrix(0.0, x, g);
    EXPECT_LT((f + g * u - bicycle_kinematics(p, x, u)).norm(), 1e-14);
  }
}

TEST(Bicycle, RotationEquivariance) {
  const BicycleParams p;
  for (std::uint32_t r = 0; r < 100; ++r) {
    const Vector s = uniform_box(7, r, Vector{{5.0, 5.0, 3.0, 1.0, 2.0, 3.0}});
    const Vector state = s.head(3);
    const Vector control{{1.0 + s[3], s[4]}};
    const double alpha = s[5];
    const Eigen::Rotation2Dd rot(alpha);
    Vector rotated = state;
    rotated.head(2) = rot * Point2(state[0], state[1]);
    rotated[2] += alpha;
    const Vector d = bicycle_kinematics(p, state, control);
    const Vector dr = bicycle_kinematics(p, rotated, control);
    const Point2 expected = rot * Point2(d[0], d[1]);
    EXPECT_NEAR(dr[0], expected[0], 1e-12);
    EXPECT_NEAR(dr[1], expected[1], 1e-12);
    EXPECT_NEAR(dr[2], d[2], 1e-12);
  }
}

TEST(Track, ProjectionOnStraightSegment) {
  const Track track({Point2(0, 0), Point2(4, 0), Point2(4, 3)}, 1.0);
  EXPECT_EQ(track.length(), 7.0);
  auto proj = track.project(Point2(1.0, 0.5));
  EXPECT_DOUBLE_EQ(proj.cross_track, 0.5);
  EXPECT_DOUBLE_EQ(proj.arc_length, 1.0);
  EXPECT_DOUBLE_EQ(proj.heading, 0.0);
  proj = track.project(Point2(4.5, 2.0));
  EXPECT_DOUBLE_EQ(proj.cross_track, -0.5);
  EXPECT_DOUBLE_EQ(proj.arc_length, 6.0);
  EXPECT_DOUBLE_EQ(proj.heading, kPi / 2.0);
  proj = track.project(Point2(4.0, 5.0));
  EXPECT_DOUBLE_EQ(proj.arc_length, 9.0);
  EXPECT_DOUBLE_EQ(proj.cross_track, 0.0);
  proj = track.project(Point2(-1.0, 0.2));
  EXPECT_DOUBLE_EQ(proj.arc_length, -1.0);
  EXPECT_EQ(track.point_at(5.5), Point2(4.0, 1.5));
}

TEST(Track, RejectsDegenerateWaypoints) {
  EXPECT_THROW(Track({Point2(0, 0)}, 1.0), ConfigError);
  EXPECT_THROW(Track({Point2(0, 0), Point2(0, 0), Point2(1, 0)}, 1.0), ConfigError);
  EXPECT_THROW(Track({Point2(0, 0), Point2(1, 0)}, 0.0), ConfigError);
}

TEST(Track, BundledTrackShape) {
  const Track track = bundled_track();
  EXPECT_EQ(track.waypoints().size(), 21u);
  EXPECT_EQ(track.half_width(), 1.0);
  EXPECT_NEAR(track.waypoints()[5].y(), 2.0, 1e-12);
  EXPECT_GT(track.length(), 20.0);
}

TEST(Track, LoadsCsvWithHeader) {
  const auto path = std::filesystem::temp_directory_path() / "pathint_track_test.csv";
  {
    std::ofstream out(path);
    out << "x,y\n0,0\n3,4\n# comment\n6,0\n";
  }
  const Track track = load_track_csv(path.string(), 0.5);
  EXPECT_EQ(track.waypoints().size(), 3u);
  EXPECT_DOUBLE_EQ(track.length(), 10.0);
  {
    std::ofstream out(path);
    out << "0,0\n1,1\nbad\n";
  }
  EXPECT_THROW(load_track_csv(path.string(), 0.5), ConfigError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_track_csv(path.string(), 0.5), ConfigError);
}

TEST(Obstacle, InterpolatesAndHolds) {
  const Obstacle o{{1.0, 3.0}, {Point2(0, 0), Point2(4, 2)}, 0.5};
  EXPECT_NO_THROW(o.validate());
  EXPECT_EQ(o.center(0.0), Point2(0, 0));
  EXPECT_EQ(o.center(2.0), Point2(2, 1));
  EXPECT_EQ(o.center(10.0), Point2(4, 2));
  const Obstacle bad{{1.0, 1.0}, {Point2(0, 0), Point2(1, 1)}, 0.5};
  EXPECT_THROW(bad.validate(), ConfigError);
  const Obstacle no_radius{{0.0}, {Point2(0, 0)}, 0.0};
  EXPECT_THROW(no_radius.validate(), ConfigError);
}

TEST(Obstacle, BundledObstaclesCrossTheTrack) {
  const Track track = bundled_track();
  const ObstacleSet set = bundled_obstacles();
  ASSERT_EQ(set.obstacles.size(), 2u);
  for (const auto& o : set.obstacles) {
    double closest = 1e9;
    for (double t = 0.0; t <= 30.0; t += 0.05) {
      closest = std::min(closest, std::abs(track.project(o.center(t)).cross_track));
    }
    EXPECT_LT(closest, track.half_width());
  }
  EXPECT_NEAR(obstacle_clearance(0.0, Point2(5.0, 2.5), set), 0.6, 1e-12);
}

TrackingWeights only_cross_track(double w) {
  TrackingWeights out;
  out.cross_track = w;
  out.heading = 0.0;
  out.progress = 0.0;
  out.obstacle = 0.0;
  return out;
}

TEST(TrackingCost, OnReferenceIsNearZero) {
  const Track track({Point2(0, 0), Point2(10, 0)}, 1.0);
  ObstacleSet far;
  far.obstacles.push_back({{0.0}, {Point2(5.0, 8.0)}, 0.5});
  const TrackingWeights w;
  const double t = 3.0;
  const double cost = tracking_cost(t, Vector{{w.reference_speed * t, 0.0, 0.0}}, track, far, w);
  EXPECT_GE(cost, 0.0);
  EXPECT_LT(cost, 1e-6);
}

TEST(TrackingCost, CollisionHitsSentinel) {
  const Track track({Point2(0, 0), Point2(10, 0)}, 1.0);
  ObstacleSet set;
  set.obstacles.push_back({{0.0}, {Point2(2.0, 0.1)}, 0.5});
  const TrackingWeights w;
  EXPECT_GE(tracking_cost(0.0, Vector{{2.0, 0.0, 0.0}}, track, set, w), w.collision_cost);
  EXPECT_GE(tracking_cost(0.0, Vector{{6.0, 1.5, 0.0}}, track, ObstacleSet{}, w), w.out_of_track_cost);
}

TEST(TrackingCost, CrossTrackTermByHand) {
  const Track track({Point2(0, 0), Point2(10, 0)}, 1.0);
  for (double e : {-0.7, -0.2, 0.0, 0.35, 0.9}) {
    EXPECT_DOUBLE_EQ(tracking_cost(0.0, Vector{{4.0, e, 0.0}}, track, ObstacleSet{}, only_cross_track(13.0)),
                     13.0 * e * e);
  }
}

TEST(TrackingCost, ObstaclePenaltyByHand) {
  const Track track({Point2(0, 0), Point2(10, 0)}, 1.0);
  ObstacleSet set;
  set.obstacles.push_back({{0.0}, {Point2(3.0, 0.8)}, 0.4});
  TrackingWeights w = only_cross_track(0.0);
  w.obstacle = 7.0;
  const double d2 = 0.8 * 0.8;
  EXPECT_NEAR(tracking_cost(0.0, Vector{{3.0, 0.0, 0.0}}, track, set, w),
              7.0 * std::exp(-(d2 - 0.16) / w.obstacle_epsilon), 1e-15);
}

TEST(TrackingCost, InvariantUnderRotatedScene) {
  const Track track = bundled_track();
  const ObstacleSet set = bundled_obstacles();
  const TrackingWeights w;
  for (std::uint32_t r = 0; r < 50; ++r) {
    const Vector s = uniform_box(9, r, Vector{{10.0, 2.5, 3.0, 3.0, 10.0}});
    const Vector state{{10.0 + s[0], s[1], s[2]}};
    const double alpha = s[3];
    const double t = 10.0 + s[4];
    const Eigen::Rotation2Dd rot(alpha);
    std::vector<Point2> rotated_points;
    for (const auto& q : track.waypoints()) {
      rotated_points.push_back(rot * q);
    }
    const Track rotated_track(rotated_points, track.half_width());
    ObstacleSet rotated_set = set;
    for (auto& o : rotated_set.obstacles) {
      for (auto& c : o.centers) {
        c = rot * c;
      }
    }
    Vector rotated_state = state;
    rotated_state.head(2) = rot * Point2(state[0], state[1]);
    rotated_state[2] += alpha;
    const double a = tracking_cost(t, state, track, set, w);
    const double b = tracking_cost(t, rotated_state, rotated_track, rotated_set, w);
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, a));
  }
}

TEST(TrackingCost, NonNegativeAndFiniteOnFuzzedStates) {
  const Track track = bundled_track();
  const ObstacleSet set = bundled_obstacles();
  const TrackingWeights w;
  const BicycleParams p;
  for (std::uint32_t r = 0; r < 100000; ++r) {
    const Vector s = uniform_box(10, r, Vector{{15.0, 6.0, 7.0, 30.0, 3.0, 3.0}});
    const Vector state{{10.0 + s[0], s[1], s[2]}};
    const double cost = tracking_cost(15.0 + s[3], state, track, set, w);
    ASSERT_GE(cost, 0.0);
    ASSERT_TRUE(std::isfinite(cost));
    ASSERT_TRUE(bicycle_kinematics(p, state, Vector{{s[4], s[5]}}).allFinite());
  }
}

// Scalar LQ

TEST(LqOracle, OneStepGainByHand) {
  const double dt = 0.1;
  const double r = 2.0;
  const double p = 3.0;
  const auto oracle = lq_analytic_oracle(1, dt, 1.0, r, p);
  ASSERT_EQ(oracle.horizon(), 1);
  EXPECT_NEAR(oracle.gains[0], -(dt * p) / (r * dt + p * dt * dt), 1e-15);
  // V_0 = min_u 1/2 (q x^2 + r u^2) dt + 1/2 p (x + u dt)^2, evaluated at the minimizer.
  const double u = oracle.control(0, 1.0);
  EXPECT_NEAR(oracle.optimal_cost(1.0), 0.5 * (1.0 + r * u * u) * dt + 0.5 * p * (1.0 + u * dt) * (1.0 + u * dt),
              1e-14);
}

TEST(LqOracle, NoStateCostMeansNoControl) {
  const auto oracle = lq_analytic_oracle(25, 0.05, 0.0, 1.0);
  for (double g : oracle.gains) {
    EXPECT_EQ(g, 0.0);
  }
  EXPECT_EQ(oracle.optimal_cost(3.0), 0.0);
}

TEST(LqOracle, ConvergesToStationaryGain) {
  const auto oracle = lq_analytic_oracle(10000, 0.01, 1.0, 1.0);
  EXPECT_LT(std::abs(oracle.gains[0] - lq_stationary_gain(0.01, 1.0, 1.0)), 1e-6);
  EXPECT_LT(std::abs(oracle.value_coeffs[0] - lq_stationary_value(0.01, 1.0, 1.0)), 1e-6);
  EXPECT_NEAR(lq_stationary_gain(0.01, 1.0, 1.0), -1.0, 0.01);
}

TEST(LqOracle, GainScheduleAchievesOptimalCost) {
  const int n = 40;
  const double dt = 0.05;
  const auto oracle = lq_analytic_oracle(n, dt, 1.0, 1.0);
  EXPECT_NEAR(oracle.control(0, 1.0), -0.9375, 1e-4);
  double x = 1.0;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = oracle.control(i, x);
    total += 0.5 * (x * x + u * u) * dt;
    x += u * dt;
  }
  EXPECT_NEAR(total, oracle.optimal_cost(1.0), 1e-12);
  // Any perturbed open-loop sequence costs more.
  x = 1.0;
  double perturbed = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = oracle.control(i, x) + 0.01 * std::sin(i);
    perturbed += 0.5 * (x * x + u * u) * dt;
    x += u * dt;
  }
  EXPECT_GT(perturbed, total);
}

TEST(LqOracle, ClosedLoopCostOfStationaryGain) {
  LqParams p;
  const double gain = lq_stationary_gain(0.05, 1.0, 1.0);
  double x = 2.0;
  double total = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double u = gain * x;
    total += 0.5 * (x * x + u * u) * 0.05;
    x += u * 0.05;
  }
  EXPECT_NEAR(lq_closed_loop_cost(p, gain, 2.0, 40, 0.05), total, 1e-12);
}

TEST(LqOracle, NoiseOnlyShiftsTheOffset) {
  const auto quiet = lq_analytic_oracle(30, 0.05, 1.0, 1.0);
  const auto noisy = lq_analytic_oracle(30, 0.05, 1.0, 1.0, 0.0, 0.7);
  EXPECT_EQ(quiet.gains, noisy.gains);
  EXPECT_GT(noisy.optimal_cost(0.0), 0.0);
  EXPECT_EQ(quiet.optimal_cost(0.0), 0.0);
}

TEST(LqModel, CostAndDynamics) {
  LqParams p;
  p.state_weight = 2.0;
  p.terminal_weight = 4.0;
  const auto model = make_lq_model(p);
  const auto cost = make_lq_cost(p);
  EXPECT_EQ(model.state_dim, 1);
  EXPECT_DOUBLE_EQ(cost.running_state_cost(0.0, Vector::Constant(1, 3.0)), 9.0);
  EXPECT_DOUBLE_EQ(cost.terminal_cost(Vector::Constant(1, 3.0)), 18.0);
  EXPECT_EQ(make_lq_cost(p, ControlCostForm::girsanov).control_cost_form, ControlCostForm::girsanov);
  p.control_weight = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

}  // namespace
}  // namespace pathint
