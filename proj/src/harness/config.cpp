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

#include "pathint/harness/config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <numbers>

namespace pathint {

namespace {

constexpr std::pair<Scenario, const char*> kScenarios[] = {
    {Scenario::cartpole_swingup, "cartpole_swingup"},
    {Scenario::bicycle_track, "bicycle_track"},
    {Scenario::lq_scalar, "lq_scalar"},
    {Scenario::cem_quadratic, "cem_quadratic"},
};

constexpr std::pair<ControllerKind, const char*> kControllers[] = {
    {ControllerKind::mppi, "mppi"},
    {ControllerKind::smooth_mppi, "smooth_mppi"},
    {ControllerKind::log_mppi, "log_mppi"},
    {ControllerKind::cem, "cem"},
    {ControllerKind::pi2_cma, "pi2_cma"},
};

Json obstacles_json(const ObstacleSet& set) {
  Json out = Json::array();
  for (const Obstacle& o : set.obstacles) {
    Json centers = Json::array();
    for (const Point2& c : o.centers) {
      centers.push_back({c.x(), c.y()});
    }
    out.push_back({{"times", o.times}, {"centers", centers}, {"radius", o.radius}});
  }
  return out;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Typed access with path-qualified errors.
class Reader {
 public:
  explicit Reader(const Json& root) : root_(root) {}

  const Json& at(const std::string& path) const {
    const Json* node = &root_;
    std::size_t start = 0;
    while (start <= path.size()) {
      const std::size_t dot = path.find('.', start);
      const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (!node->is_object() || !node->contains(key)) {
        throw ConfigError(fmt::format("missing configuration key '{}'", path));
      }
      node = &(*node)[key];
      if (dot == std::string::npos) {
        break;
      }
      start = dot + 1;
    }
    return *node;
  }

  double number(const std::string& path) const {
    const Json& v = at(path);
    if (!v.is_number()) {
      throw ConfigError(fmt::format("{}: expected a number, got {}", path, v.dump()));
    }
    return v.get<double>();
  }

  int integer(const std::string& path) const {
    const Json& v = at(path);
    if (!v.is_number_integer()) {
      throw ConfigError(fmt::format("{}: expected an integer, got {}", path, v.dump()));
    }
    return v.get<int>();
  }

  std::uint64_t seed(const std::string& path) const {
    const Json& v = at(path);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw ConfigError(fmt::format("{}: expected a non-negative integer, got {}", path, v.dump()));
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& path) const {
    const Json& v = at(path);
    if (!v.is_boolean()) {
      throw ConfigError(fmt::format("{}: expected true or false, got {}", path, v.dump()));
    }
    return v.get<bool>();
  }

  std::string string(const std::string& path) const {
    const Json& v = at(path);
    if (!v.is_string()) {
      throw ConfigError(fmt::format("{}: expected a string, got {}", path, v.dump()));
    }
    return v.get<std::string>();
  }

  Vector vector(const std::string& path, int size = -1) const { return to_vector(at(path), path, size); }

  static Vector to_vector(const Json& v, const std::string& path, int size) {
    if (v.is_number() && size <= 1) {
      return Vector::Constant(size < 0 ? 1 : size, v.get<double>());
    }
    if (!v.is_array()) {
      throw ConfigError(fmt::format("{}: expected an array of numbers, got {}", path, v.dump()));
    }
    if (size >= 0 && static_cast<int>(v.size()) != size) {
      throw ConfigError(fmt::format("{}: expected {} entries, got {}", path, size, v.size()));
    }
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (!v[j].is_number()) {
        throw ConfigError(fmt::format("{}[{}]: expected a number, got {}", path, j, v[j].dump()));
      }
      out[static_cast<Eigen::Index>(j)] = v[j].get<double>();
    }
    return out;
  }

  // A scalar broadcasts to every channel.
  Vector channels(const std::string& path, int size) const {
    const Json& v = at(path);
    if (v.is_number()) {
      return Vector::Constant(size, v.get<double>());
    }
    return to_vector(v, path, size);
  }

 private:
  const Json& root_;
};

template <class Fn>
auto with_prefix(const std::string& prefix, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(prefix, 0) == 0) {
      throw;
    }
    throw ConfigError(fmt::format("{}: {}", prefix, what));
  }
}

ObstacleSet parse_obstacles(const Json& v) {
  const std::string path = "bicycle.obstacles";
  if (!v.is_array()) {
    throw ConfigError(path + ": expected an array of obstacles");
  }
  ObstacleSet set;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const std::string here = fmt::format("{}[{}]", path, j);
    const Json& o = v[j];
    if (!o.is_object()) {
      throw ConfigError(here + ": expected an object");
    }
    for (const auto& [key, value] : o.items()) {
      if (key != "times" && key != "centers" && key != "radius") {
        throw ConfigError(fmt::format("unknown configuration key '{}.{}'", here, key));
      }
    }
    Obstacle obstacle;
    if (!o.contains("times") || !o.contains("centers") || !o.contains("radius")) {
      throw ConfigError(here + ": needs times, centers and radius");
    }
    const Vector times = Reader::to_vector(o["times"], here + ".times", -1);
    obstacle.times.assign(times.data(), times.data() + times.size());
    if (!o["centers"].is_array()) {
      throw ConfigError(here + ".centers: expected an array of [x, y]");
    }
    for (std::size_t c = 0; c < o["centers"].size(); ++c) {
      const Vector xy = Reader::to_vector(o["centers"][c], fmt::format("{}.centers[{}]", here, c), 2);
      obstacle.centers.emplace_back(xy[0], xy[1]);
    }
    if (!o["radius"].is_number()) {
      throw ConfigError(here + ".radius: expected a number");
    }
    obstacle.radius = o["radius"].get<double>();
    with_prefix(here, [&] { obstacle.validate(); return 0; });
    set.obstacles.push_back(std::move(obstacle));
  }
  return set;
}

template <class Enum, std::size_t N>
Enum parse_enum(const std::string& path, const std::string& value,
                const std::pair<Enum, const char*> (&options)[N]) {
  std::string names;
  for (const auto& [e, name] : options) {
    if (value == name) {
      return e;
    }
    names += names.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError(fmt::format("{}: unknown value '{}' (expected one of {})", path, value, names));
}

}  // namespace

std::string to_string(Scenario s) {
  for (const auto& [e, name] : kScenarios) {
    if (e == s) {
      return name;
    }
  }
  return "unknown";
}

std::string to_string(ControllerKind c) {
  for (const auto& [e, name] : kControllers) {
    if (e == c) {
      return name;
    }
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& name) { return parse_enum("scenario", name, kScenarios); }

ControllerKind parse_controller(const std::string& name) {
  return parse_enum("controller", name, kControllers);
}

Json default_config() {
  const CartPoleParams cp;
  const CartPoleCostWeights cw;
  const BicycleParams bp;
  const TrackingWeights tw;
  const LqParams lq;
  Json c;
  c["scenario"] = "lq_scalar";
  c["controller"] = "mppi";
  c["seed"] = 0;
  c["harness"] = {{"duration", 2.0},     {"dt", 0.05},        {"out_dir", ""},
                  {"plant_noise", false}, {"num_threads", 0}};
  c["mppi"] = {{"num_samples", 1024},
               {"horizon", 50},
               {"temperature", 1.0},
               {"noise_scale", nullptr},
               {"weighting", "per_timestep"},
               {"divergence_cost", 1e9}};
  c["smooth_mppi"] = {{"action_rate_weight", 1.0}};
  c["log_mppi"] = {{"log_normal_mean", 0.0}, {"log_normal_std", 0.5}};
  c["cem"] = {{"num_samples", 64},
              {"elite_count", 8},
              {"max_iters", 50},
              {"receding_iters", 3},
              {"tolerance", 1e-6},
              {"covariance_floor", 1e-8},
              {"centering", "previous_mean"},
              {"common_random_numbers", false},
              {"horizon", 50},
              {"initial_std", 1.0}};
  c["pi2_cma"] = {{"num_samples", 32},
                  {"horizon", 50},
                  {"temperature", 1.0},
                  {"covariance_floor", 1e-8},
                  {"centering", "previous_mean"},
                  {"exploration", "per_step"},
                  {"adapt_covariance", true},
                  {"initial_std", 1.0},
                  {"iterations", 200},
                  {"gain_std", 1.0}};
  c["cartpole"] = {{"cart_mass", cp.cart_mass},
                   {"pole_mass", cp.pole_mass},
                   {"pole_half_length", cp.pole_half_length},
                   {"gravity", cp.gravity},
                   {"force_limit", cp.force_limit},
                   {"noise_scale", cp.noise_scale},
                   {"x0", {0.0, 0.0, std::numbers::pi, 0.0}},
                   {"cost",
                    {{"position", cw.position},
                     {"velocity", cw.velocity},
                     {"angle", cw.angle},
                     {"angular_velocity", cw.angular_velocity},
                     {"terminal_scale", cw.terminal_scale},
                     {"control", cw.control}}}};
  c["bicycle"] = {{"variant", "unicycle"},
                  {"wheelbase", bp.wheelbase},
                  {"min_speed", bp.min_speed},
                  {"max_speed", bp.max_speed},
                  {"max_turn_rate", bp.max_turn_rate},
                  {"max_steering", bp.max_steering},
                  {"noise_scale", {bp.noise_scale[0], bp.noise_scale[1]}},
                  {"track_csv", ""},
                  {"track_half_width", 1.0},
                  {"obstacles", obstacles_json(bundled_obstacles())},
                  {"x0", nullptr},
                  {"finish_tolerance", 0.5},
                  {"max_tracking_error", 0.5},
                  {"cost",
                   {{"cross_track", tw.cross_track},
                    {"heading", tw.heading},
                    {"progress", tw.progress},
                    {"reference_speed", tw.reference_speed},
                    {"obstacle", tw.obstacle},
                    {"obstacle_epsilon", tw.obstacle_epsilon},
                    {"collision_cost", tw.collision_cost},
                    {"out_of_track_cost", tw.out_of_track_cost},
                    {"control", {tw.control[0], tw.control[1]}}}}};
  c["lq"] = {{"state_weight", lq.state_weight},
             {"control_weight", lq.control_weight},
             {"terminal_weight", lq.terminal_weight},
             {"noise_scale", lq.noise_scale},
             {"x0", 1.0},
             {"cost_form", "girsanov"}};
  c["cem_quadratic"] = {{"target", {1.0, -2.0}}, {"initial_mean", {0.0, 0.0}}, {"initial_std", {2.0, 2.0}}};
  return c;
}

Json scenario_preset(Scenario scenario) {
  switch (scenario) {
    case Scenario::cartpole_swingup:
      return {{"harness", {{"duration", 10.0}, {"dt", 0.02}}},
              {"mppi", {{"num_samples", 1024}, {"horizon", 50}, {"temperature", 1.0}}},
              {"cem",
               {{"num_samples", 256},
                {"elite_count", 16},
                {"horizon", 50},
                {"initial_std", 5.0},
                {"centering", "elite_mean"}}},
              {"pi2_cma", {{"num_samples", 256}, {"horizon", 50}, {"initial_std", 5.0}}}};
    case Scenario::bicycle_track:
      return {{"harness", {{"duration", 30.0}, {"dt", 0.05}}},
              {"mppi", {{"num_samples", 512}, {"horizon", 40}, {"temperature", 1.0}}},
              {"cem",
               {{"num_samples", 256},
                {"elite_count", 16},
                {"horizon", 40},
                {"initial_std", {0.5, 1.0}},
                {"centering", "elite_mean"}}},
              {"pi2_cma", {{"num_samples", 256}, {"horizon", 40}, {"initial_std", {0.5, 1.0}}}}};
    case Scenario::lq_scalar:
      return {{"harness", {{"duration", 2.0}, {"dt", 0.05}}},
              {"mppi", {{"num_samples", 10000}, {"horizon", 40}, {"temperature", 1.0}}},
              {"cem",
               {{"num_samples", 2000},
                {"elite_count", 200},
                {"max_iters", 200},
                {"tolerance", 1e-4},
                {"horizon", 40},
                {"initial_std", 1.0}}},
              {"pi2_cma", {{"num_samples", 16}, {"horizon", 40}, {"initial_std", 1.0}}}};
    case Scenario::cem_quadratic:
      return {{"controller", "cem"},
              {"cem", {{"num_samples", 64}, {"elite_count", 8}, {"max_iters", 50}, {"tolerance", 1e-6}}}};
  }
  return Json::object();
}

void merge_config(Json& base, const Json& overlay, const std::string& path) {
  if (!overlay.is_object()) {
    throw ConfigError(fmt::format("{}: expected an object", path.empty() ? "configuration" : path));
  }
  for (const auto& [key, value] : overlay.items()) {
    const std::string here = join(path, key);
    if (!base.contains(key)) {
      throw ConfigError(fmt::format("unknown configuration key '{}'", here));
    }
    Json& target = base[key];
    if (target.is_object()) {
      merge_config(target, value, here);
    } else {
      target = value;
    }
  }
}

void apply_override(Json& config, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(fmt::format("--set expects key=value, got '{}'", assignment));
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) {
    value = text;
  }
  Json overlay = value;
  std::size_t end = key.size();
  while (true) {
    const std::size_t dot = key.rfind('.', end - 1);
    const std::size_t start = dot == std::string::npos ? 0 : dot + 1;
    Json wrapped;
    wrapped[key.substr(start, end - start)] = std::move(overlay);
    overlay = std::move(wrapped);
    if (dot == std::string::npos) {
      break;
    }
    end = dot;
  }
  merge_config(config, overlay);
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(fmt::format("cannot open config file '{}'", path));
  }
  Json parsed = Json::parse(in, nullptr, false, true);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw ConfigError(fmt::format("{}: not a JSON object", path));
  }
  return parsed;
}

Json build_config(const ConfigSources& sources) {
  Json config = default_config();
  Json file = Json::object();
  if (sources.file) {
    file = load_config_file(*sources.file);
  }
  // The scenario picks the preset, so resolve it first.
  std::string scenario = config["scenario"].get<std::string>();
  if (file.contains("scenario") && file["scenario"].is_string()) {
    scenario = file["scenario"].get<std::string>();
  }
  for (const std::string& set : sources.overrides) {
    Json probe = default_config();
    apply_override(probe, set);
    if (probe["scenario"].is_string()) {
      scenario = probe["scenario"].get<std::string>();
    }
  }
  if (sources.scenario) {
    scenario = *sources.scenario;
  }
  merge_config(config, scenario_preset(parse_scenario(scenario)));
  merge_config(config, file);
  for (const std::string& set : sources.overrides) {
    apply_override(config, set);
  }
  config["scenario"] = scenario;
  if (sources.controller) {
    config["controller"] = *sources.controller;
  }
  if (sources.seed) {
    config["seed"] = *sources.seed;
  }
  if (sources.out_dir) {
    config["harness"]["out_dir"] = *sources.out_dir;
  }
  return config;
}

int ExperimentSpec::steps() const {
  return std::max(1, static_cast<int>(std::lround(duration / dt)));
}

ExperimentSpec spec_from_config(const Json& config) {
  // Rejects keys that the defaults do not know about.
  Json check = default_config();
  merge_config(check, config);

  const Reader r(config);
  ExperimentSpec s;
  s.scenario = parse_scenario(r.string("scenario"));
  s.controller = parse_controller(r.string("controller"));
  s.seed = r.seed("seed");
  s.duration = r.number("harness.duration");
  s.dt = r.number("harness.dt");
  s.out_dir = r.string("harness.out_dir");
  s.plant_noise = r.boolean("harness.plant_noise");
  const int threads = r.integer("harness.num_threads");
  if (!(s.duration > 0.0)) {
    throw ConfigError("harness.duration must be > 0");
  }
  if (!(s.dt > 0.0)) {
    throw ConfigError("harness.dt must be > 0");
  }
  if (threads < 0) {
    throw ConfigError("harness.num_threads must be >= 0");
  }

  s.mppi.num_samples = r.integer("mppi.num_samples");
  s.mppi.horizon = r.integer("mppi.horizon");
  s.mppi.dt = s.dt;
  s.mppi.temperature = r.number("mppi.temperature");
  if (!r.at("mppi.noise_scale").is_null()) {
    s.mppi.noise_scale = r.vector("mppi.noise_scale");
  }
  s.mppi.weighting = parse_enum<MppiWeighting>(
      "mppi.weighting", r.string("mppi.weighting"),
      {{MppiWeighting::per_timestep, "per_timestep"}, {MppiWeighting::per_trajectory, "per_trajectory"}});
  s.mppi.divergence_cost = r.number("mppi.divergence_cost");
  s.mppi.num_threads = threads;
  const double rate = r.number("smooth_mppi.action_rate_weight");
  s.mppi.log_normal_mean = r.number("log_mppi.log_normal_mean");
  s.mppi.log_normal_std = r.number("log_mppi.log_normal_std");
  if (s.controller == ControllerKind::smooth_mppi) {
    s.mppi.action_rate_weight = rate;
  }
  if (s.controller == ControllerKind::log_mppi) {
    s.mppi.noise = NoiseDistribution::normal_log_normal;
  }
  if (!(rate >= 0.0)) {
    throw ConfigError("smooth_mppi.action_rate_weight must be >= 0");
  }
  s.mppi.validate();

  s.cem.num_samples = r.integer("cem.num_samples");
  s.cem.elite_count = r.integer("cem.elite_count");
  s.cem.max_iters = r.integer("cem.max_iters");
  s.cem.tolerance = r.number("cem.tolerance");
  s.cem.covariance_floor = r.number("cem.covariance_floor");
  s.cem.centering = parse_enum<CemCentering>(
      "cem.centering", r.string("cem.centering"),
      {{CemCentering::previous_mean, "previous_mean"}, {CemCentering::elite_mean, "elite_mean"}});
  s.cem.common_random_numbers = r.boolean("cem.common_random_numbers");
  s.cem.num_threads = threads;
  s.cem_horizon = r.integer("cem.horizon");
  s.cem_receding_iters = r.integer("cem.receding_iters");
  s.cem.validate();
  if (s.cem_horizon < 1 || s.cem_receding_iters < 1) {
    throw ConfigError("cem.horizon and cem.receding_iters must be >= 1");
  }

  s.pi2.num_samples = r.integer("pi2_cma.num_samples");
  s.pi2.horizon = r.integer("pi2_cma.horizon");
  s.pi2.dt = s.dt;
  s.pi2.temperature = r.number("pi2_cma.temperature");
  s.pi2.covariance_floor = r.number("pi2_cma.covariance_floor");
  s.pi2.centering = parse_enum<CovarianceCentering>(
      "pi2_cma.centering", r.string("pi2_cma.centering"),
      {{CovarianceCentering::previous_mean, "previous_mean"},
       {CovarianceCentering::weighted_mean, "weighted_mean"}});
  s.pi2.exploration = parse_enum<ExplorationMode>(
      "pi2_cma.exploration", r.string("pi2_cma.exploration"),
      {{ExplorationMode::per_step, "per_step"}, {ExplorationMode::per_rollout, "per_rollout"}});
  s.pi2.adapt_covariance = r.boolean("pi2_cma.adapt_covariance");
  s.pi2.num_threads = threads;
  s.pi2_iterations = r.integer("pi2_cma.iterations");
  s.pi2_gain_std = r.number("pi2_cma.gain_std");
  s.pi2.validate();
  if (s.pi2_iterations < 1 || !(s.pi2_gain_std > 0.0)) {
    throw ConfigError("pi2_cma.iterations must be >= 1 and pi2_cma.gain_std > 0");
  }

  s.cartpole.cart_mass = r.number("cartpole.cart_mass");
  s.cartpole.pole_mass = r.number("cartpole.pole_mass");
  s.cartpole.pole_half_length = r.number("cartpole.pole_half_length");
  s.cartpole.gravity = r.number("cartpole.gravity");
  s.cartpole.force_limit = r.number("cartpole.force_limit");
  s.cartpole.noise_scale = r.number("cartpole.noise_scale");
  s.cartpole_x0 = r.vector("cartpole.x0", 4);
  s.cartpole_cost.position = r.number("cartpole.cost.position");
  s.cartpole_cost.velocity = r.number("cartpole.cost.velocity");
  s.cartpole_cost.angle = r.number("cartpole.cost.angle");
  s.cartpole_cost.angular_velocity = r.number("cartpole.cost.angular_velocity");
  s.cartpole_cost.terminal_scale = r.number("cartpole.cost.terminal_scale");
  s.cartpole_cost.control = r.number("cartpole.cost.control");
  with_prefix("cartpole", [&] { s.cartpole.validate(); s.cartpole_cost.validate(); return 0; });

  s.bicycle.variant = parse_enum<BicycleVariant>(
      "bicycle.variant", r.string("bicycle.variant"),
      {{BicycleVariant::unicycle, "unicycle"}, {BicycleVariant::kinematic_bicycle, "kinematic_bicycle"}});
  s.bicycle.wheelbase = r.number("bicycle.wheelbase");
  s.bicycle.min_speed = r.number("bicycle.min_speed");
  s.bicycle.max_speed = r.number("bicycle.max_speed");
  s.bicycle.max_turn_rate = r.number("bicycle.max_turn_rate");
  s.bicycle.max_steering = r.number("bicycle.max_steering");
  s.bicycle.noise_scale = r.channels("bicycle.noise_scale", 2);
  s.track_csv = r.string("bicycle.track_csv");
  s.track_half_width = r.number("bicycle.track_half_width");
  s.obstacles = parse_obstacles(r.at("bicycle.obstacles"));
  if (!r.at("bicycle.x0").is_null()) {
    s.bicycle_x0 = r.vector("bicycle.x0", s.bicycle.state_dim());
  }
  s.bicycle_finish_tolerance = r.number("bicycle.finish_tolerance");
  s.bicycle_max_error = r.number("bicycle.max_tracking_error");
  s.tracking.cross_track = r.number("bicycle.cost.cross_track");
  s.tracking.heading = r.number("bicycle.cost.heading");
  s.tracking.progress = r.number("bicycle.cost.progress");
  s.tracking.reference_speed = r.number("bicycle.cost.reference_speed");
  s.tracking.obstacle = r.number("bicycle.cost.obstacle");
  s.tracking.obstacle_epsilon = r.number("bicycle.cost.obstacle_epsilon");
  s.tracking.collision_cost = r.number("bicycle.cost.collision_cost");
  s.tracking.out_of_track_cost = r.number("bicycle.cost.out_of_track_cost");
  s.tracking.control = r.channels("bicycle.cost.control", 2);
  with_prefix("bicycle", [&] { s.bicycle.validate(); s.tracking.validate(); return 0; });
  if (!(s.track_half_width > 0.0)) {
    throw ConfigError("bicycle.track_half_width must be > 0");
  }

  s.lq.state_weight = r.number("lq.state_weight");
  s.lq.control_weight = r.number("lq.control_weight");
  s.lq.terminal_weight = r.number("lq.terminal_weight");
  s.lq.noise_scale = r.number("lq.noise_scale");
  s.lq_x0 = r.number("lq.x0");
  s.lq_cost_form = parse_enum<ControlCostForm>(
      "lq.cost_form", r.string("lq.cost_form"),
      {{ControlCostForm::perturbed, "perturbed"}, {ControlCostForm::girsanov, "girsanov"}});
  s.lq.validate();

  s.quadratic_target = r.vector("cem_quadratic.target");
  s.quadratic_mean = r.vector("cem_quadratic.initial_mean", static_cast<int>(s.quadratic_target.size()));
  s.quadratic_std = r.vector("cem_quadratic.initial_std", static_cast<int>(s.quadratic_target.size()));
  if ((s.quadratic_std.array() <= 0.0).any()) {
    throw ConfigError("cem_quadratic.initial_std entries must be > 0");
  }

  int control_dim = 1;
  if (s.scenario == Scenario::bicycle_track) {
    control_dim = 2;
  }
  s.cem_initial_std = r.channels("cem.initial_std", control_dim);
  s.pi2_initial_std = r.channels("pi2_cma.initial_std", control_dim);
  if ((s.cem_initial_std.array() <= 0.0).any() || (s.pi2_initial_std.array() <= 0.0).any()) {
    throw ConfigError("cem.initial_std and pi2_cma.initial_std entries must be > 0");
  }
  if (s.mppi.noise_scale.size() > 0 && s.mppi.noise_scale.size() != control_dim) {
    throw ConfigError(fmt::format("mppi.noise_scale: expected {} entries for scenario {}", control_dim,
                                  to_string(s.scenario)));
  }
  if (s.scenario == Scenario::cem_quadratic && s.controller != ControllerKind::cem) {
    throw ConfigError(fmt::format("controller: scenario cem_quadratic only supports cem, got {}",
                                  to_string(s.controller)));
  }
  s.config = config;
  return s;
}

}  // namespace pathint
