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

#ifndef PATHINT_MODELS_BICYCLE_HPP_
#define PATHINT_MODELS_BICYCLE_HPP_

#include <string>
#include <vector>

#include "pathint/core.hpp"

namespace pathint {

using Point2 = Eigen::Vector2d;

enum class BicycleVariant {
  /// State (x, y, heading), controls (v, omega).
  unicycle,
  /// State (x, y, heading, steering), controls (v, steering rate).
  kinematic_bicycle,
};

struct BicycleParams {
  BicycleVariant variant = BicycleVariant::unicycle;
  double wheelbase = 0.5;
  double min_speed = 0.0;
  double max_speed = 2.0;
  /// omega limit for the unicycle, steering-rate limit for the bicycle.
  double max_turn_rate = 2.0;
  /// Steering angle limit, bicycle variant only.
  double max_steering = 0.6;
  Vector noise_scale = Vector::Constant(2, 0.3);

  void validate() const;
  int state_dim() const { return variant == BicycleVariant::unicycle ? 3 : 4; }
};

void bicycle_kinematics(const BicycleParams& p, ConstVectorRef state, ConstVectorRef control,
                        VectorRef dxdt);
Vector bicycle_kinematics(const BicycleParams& p, const Vector& state, const Vector& control);

DynamicsModel make_bicycle_model(const BicycleParams& p);

/// Piecewise-linear reference path with a lateral half-width.
class Track {
 public:
  Track(std::vector<Point2> waypoints, double half_width);

  struct Projection {
    /// Signed lateral offset, positive to the left of the path.
    double cross_track = 0.0;
    /// Arc length of the closest point. The first and last segments extend
    /// past the ends, so this may be negative or exceed length().
    double arc_length = 0.0;
    /// Path direction at the closest point.
    double heading = 0.0;
  };

  Projection project(const Point2& p) const;
  double length() const { return cumulative_.back(); }
  double half_width() const { return half_width_; }
  const std::vector<Point2>& waypoints() const { return waypoints_; }
  Point2 point_at(double arc_length) const;

 private:
  std::vector<Point2> waypoints_;
  std::vector<double> cumulative_;
  std::vector<Point2> unit_;
  std::vector<double> segment_length_;
  std::vector<double> heading_;
  double half_width_;
};

/// Reads "x,y" rows; a non-numeric first row is treated as a header.
Track load_track_csv(const std::string& path, double half_width);

/// y = 2 sin(2 pi x / 20) sampled every metre on x in [0, 20], half-width 1 m.
Track bundled_track();

/// Disc moving along a waypoint schedule, linearly interpolated and held at the ends.
struct Obstacle {
  std::vector<double> times;
  std::vector<Point2> centers;
  double radius = 0.4;

  void validate() const;
  Point2 center(double t) const;
};

struct ObstacleSet {
  std::vector<Obstacle> obstacles;
};

/// Two obstacles that cross the bundled track near arc length 5 m and 14 m.
ObstacleSet bundled_obstacles();

struct TrackingWeights {
  double cross_track = 20.0;
  double heading = 2.0;
  double progress = 5.0;
  double reference_speed = 1.0;
  double obstacle = 50.0;
  /// Length scale epsilon (m^2) of exp(-(d^2 - r^2) / epsilon).
  double obstacle_epsilon = 0.05;
  double collision_cost = 1e5;
  double out_of_track_cost = 1e5;
  /// R in 1/2 u'Ru.
  Vector control = Vector::Constant(2, 0.05);

  void validate() const;
};

/// Running cost at time t: squared cross-track, heading and progress errors,
/// obstacle penalties and the collision / out-of-track sentinels.
double tracking_cost(double t, ConstVectorRef state, const Track& track, const ObstacleSet& obstacles,
                     const TrackingWeights& w);

CostModel make_tracking_cost(const Track& track, const ObstacleSet& obstacles,
                             const TrackingWeights& w);

/// Smallest center distance minus radius over all obstacles (+inf without obstacles).
double obstacle_clearance(double t, const Point2& p, const ObstacleSet& obstacles);

}  // namespace pathint

#endif  // PATHINT_MODELS_BICYCLE_HPP_
