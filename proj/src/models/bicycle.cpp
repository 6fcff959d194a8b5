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

#include "pathint/models/bicycle.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "pathint/models/cartpole.hpp"

namespace pathint {

void BicycleParams::validate() const {
  if (!(wheelbase > 0.0)) {
    throw ConfigError("bicycle.wheelbase must be > 0");
  }
  if (!(max_speed > 0.0) || !(min_speed <= max_speed)) {
    throw ConfigError("bicycle speed limits must satisfy min_speed <= max_speed, max_speed > 0");
  }
  if (!(max_turn_rate > 0.0) || !(max_steering > 0.0)) {
    throw ConfigError("bicycle turn and steering limits must be > 0");
  }
  if (noise_scale.size() != 2 || (noise_scale.array() < 0.0).any()) {
    throw ConfigError("bicycle.noise_scale needs two entries >= 0");
  }
}

void bicycle_kinematics(const BicycleParams& p, ConstVectorRef state, ConstVectorRef control,
                        VectorRef dxdt) {
  const double v = std::clamp(control[0], p.min_speed, p.max_speed);
  const double w = std::clamp(control[1], -p.max_turn_rate, p.max_turn_rate);
  dxdt[0] = v * std::cos(state[2]);
  dxdt[1] = v * std::sin(state[2]);
  if (p.variant == BicycleVariant::unicycle) {
    dxdt[2] = w;
  } else {
    const double delta = std::clamp(state[3], -p.max_steering, p.max_steering);
    dxdt[2] = v * std::tan(delta) / p.wheelbase;
    dxdt[3] = w;
  }
}

Vector bicycle_kinematics(const BicycleParams& p, const Vector& state, const Vector& control) {
  Vector d(p.state_dim());
  bicycle_kinematics(p, state, control, d);
  return d;
}

DynamicsModel make_bicycle_model(const BicycleParams& p) {
  p.validate();
  DynamicsModel model;
  model.state_dim = p.state_dim();
  model.control_dim = 2;
  model.drift = [](double, ConstVectorRef, VectorRef dxdt) { dxdt.setZero(); };
  model.input_matrix = [p](double, ConstVectorRef x, MatrixRef g) {
    g.setZero();
    g(0, 0) = std::cos(x[2]);
    g(1, 0) = std::sin(x[2]);
    if (p.variant == BicycleVariant::unicycle) {
      g(2, 1) = 1.0;
    } else {
      g(2, 0) = std::tan(std::clamp(x[3], -p.max_steering, p.max_steering)) / p.wheelbase;
      g(3, 1) = 1.0;
    }
  };
  model.diffusion_scale = p.noise_scale;
  model.control_lower = Vector{{p.min_speed, -p.max_turn_rate}};
  model.control_upper = Vector{{p.max_speed, p.max_turn_rate}};
  return model;
}

Track::Track(std::vector<Point2> waypoints, double half_width)
    : waypoints_(std::move(waypoints)), half_width_(half_width) {
  if (waypoints_.size() < 2) {
    throw ConfigError("a track needs at least two waypoints");
  }
  if (!(half_width_ > 0.0)) {
    throw ConfigError("track half-width must be > 0");
  }
  cumulative_.push_back(0.0);
  for (std::size_t j = 0; j + 1 < waypoints_.size(); ++j) {
    const Point2 d = waypoints_[j + 1] - waypoints_[j];
    const double len = d.norm();
    if (!(len > 1e-12)) {
      throw ConfigError(fmt::format("track waypoints {} and {} coincide", j, j + 1));
    }
    segment_length_.push_back(len);
    unit_.push_back(d / len);
    heading_.push_back(std::atan2(d.y(), d.x()));
    cumulative_.push_back(cumulative_.back() + len);
  }
}

Track::Projection Track::project(const Point2& p) const {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_j = 0;
  double best_along = 0.0;
  double best_side = 0.0;
  const std::size_t last = unit_.size() - 1;
  for (std::size_t j = 0; j <= last; ++j) {
    const double rx = p.x() - waypoints_[j].x();
    const double ry = p.y() - waypoints_[j].y();
    const double ux = unit_[j].x();
    const double uy = unit_[j].y();
    double along = rx * ux + ry * uy;
    // The end segments extend past the end points so that overshoot reads as
    // progress rather than lateral error.
    if (along < 0.0 && j != 0) {
      along = 0.0;
    } else if (along > segment_length_[j] && j != last) {
      along = segment_length_[j];
    }
    const double ox = rx - along * ux;
    const double oy = ry - along * uy;
    const double d2 = ox * ox + oy * oy;
    if (d2 < best) {
      best = d2;
      best_j = j;
      best_along = along;
      best_side = ux * ry - uy * rx;
    }
  }
  Projection out;
  out.cross_track = best_side < 0.0 ? -std::sqrt(best) : std::sqrt(best);
  out.arc_length = cumulative_[best_j] + best_along;
  out.heading = heading_[best_j];
  return out;
}

Point2 Track::point_at(double s) const {
  s = std::clamp(s, 0.0, length());
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative_.begin() - 1, 0));
  j = std::min(j, unit_.size() - 1);
  return waypoints_[j] + (s - cumulative_[j]) * unit_[j];
}

Track load_track_csv(const std::string& path, double half_width) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(fmt::format("cannot open track file '{}'", path));
  }
  std::vector<Point2> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double x = 0.0;
    double y = 0.0;
    if (!(fields >> x >> y)) {
      if (points.empty() && line_no == 1) {
        continue;
      }
      throw ConfigError(fmt::format("{}:{}: expected 'x,y'", path, line_no));
    }
    points.emplace_back(x, y);
  }
  return Track(std::move(points), half_width);
}

Track bundled_track() {
  std::vector<Point2> points;
  for (int i = 0; i <= 20; ++i) {
    const double x = i;
    points.emplace_back(x, 2.0 * std::sin(2.0 * std::numbers::pi * x / 20.0));
  }
  return Track(std::move(points), 1.0);
}

void Obstacle::validate() const {
  if (!(radius > 0.0)) {
    throw ConfigError("obstacle radius must be > 0");
  }
  if (centers.empty() || centers.size() != times.size()) {
    throw ConfigError("obstacle schedule needs one time per center and at least one center");
  }
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (!(times[j] > times[j - 1])) {
      throw ConfigError("obstacle schedule times must be strictly increasing");
    }
  }
}

Point2 Obstacle::center(double t) const {
  if (t <= times.front()) {
    return centers.front();
  }
  if (t >= times.back()) {
    return centers.back();
  }
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - times.begin());
  const double a = (t - times[j - 1]) / (times[j] - times[j - 1]);
  return (1.0 - a) * centers[j - 1] + a * centers[j];
}

ObstacleSet bundled_obstacles() {
  ObstacleSet set;
  set.obstacles.push_back({{0.0, 8.0}, {Point2(5.0, 3.5), Point2(5.0, 0.5)}, 0.4});
  set.obstacles.push_back({{9.5, 17.5}, {Point2(14.0, -3.6), Point2(14.0, 0.4)}, 0.4});
  return set;
}

void TrackingWeights::validate() const {
  if (cross_track < 0.0 || heading < 0.0 || progress < 0.0 || obstacle < 0.0 ||
      collision_cost < 0.0 || out_of_track_cost < 0.0 || reference_speed < 0.0) {
    throw ConfigError("tracking weights must be >= 0");
  }
  if (!(obstacle_epsilon > 0.0)) {
    throw ConfigError("tracking obstacle_epsilon must be > 0");
  }
  if (control.size() != 2 || (control.array() < 0.0).any()) {
    throw ConfigError("tracking control weight needs two entries >= 0");
  }
}

double obstacle_clearance(double t, const Point2& p, const ObstacleSet& obstacles) {
  double clearance = std::numeric_limits<double>::infinity();
  for (const Obstacle& o : obstacles.obstacles) {
    clearance = std::min(clearance, (p - o.center(t)).norm() - o.radius);
  }
  return clearance;
}

double tracking_cost(double t, ConstVectorRef state, const Track& track, const ObstacleSet& obstacles,
                     const TrackingWeights& w) {
  const Point2 p(state[0], state[1]);
  const Track::Projection proj = track.project(p);
  const double heading_error = wrap_angle(state[2] - proj.heading);
  const double s_ref = std::min(w.reference_speed * t, track.length());
  const double progress_error = proj.arc_length - s_ref;
  double cost = w.cross_track * proj.cross_track * proj.cross_track +
                w.heading * heading_error * heading_error +
                w.progress * progress_error * progress_error;
  for (const Obstacle& o : obstacles.obstacles) {
    const double d2 = (p - o.center(t)).squaredNorm();
    const double r2 = o.radius * o.radius;
    if (d2 < r2) {
      cost += w.collision_cost;
    } else if (w.obstacle > 0.0) {
      cost += w.obstacle * std::exp(-(d2 - r2) / w.obstacle_epsilon);
    }
  }
  if (std::abs(proj.cross_track) > track.half_width()) {
    cost += w.out_of_track_cost;
  }
  return cost;
}

CostModel make_tracking_cost(const Track& track, const ObstacleSet& obstacles,
                             const TrackingWeights& w) {
  w.validate();
  for (const Obstacle& o : obstacles.obstacles) {
    o.validate();
  }
  auto shared_track = std::make_shared<const Track>(track);
  auto shared_obstacles = std::make_shared<const ObstacleSet>(obstacles);
  CostModel cost;
  cost.running_state_cost = [shared_track, shared_obstacles, w](double t, ConstVectorRef x) {
    return tracking_cost(t, x, *shared_track, *shared_obstacles, w);
  };
  cost.terminal_cost = [](ConstVectorRef) { return 0.0; };
  cost.control_weight = w.control.asDiagonal();
  return cost;
}

}  // namespace pathint
