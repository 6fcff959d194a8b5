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

#ifndef PATHINT_HARNESS_CONFIG_HPP_
#define PATHINT_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pathint/cem.hpp"
#include "pathint/models/bicycle.hpp"
#include "pathint/models/cartpole.hpp"
#include "pathint/models/lq.hpp"
#include "pathint/mppi.hpp"
#include "pathint/pi2_cma.hpp"

namespace pathint {

using Json = nlohmann::ordered_json;

enum class Scenario { cartpole_swingup, bicycle_track, lq_scalar, cem_quadratic };
enum class ControllerKind { mppi, smooth_mppi, log_mppi, cem, pi2_cma };

std::string to_string(Scenario s);
std::string to_string(ControllerKind c);
Scenario parse_scenario(const std::string& name);
ControllerKind parse_controller(const std::string& name);

/// Every key the configuration accepts, with its default value.
Json default_config();

/// Per-scenario overrides applied on top of the defaults.
Json scenario_preset(Scenario scenario);

/// Recursively merges `overlay` into `base`. Keys absent from `base` are
/// rejected with their dotted path.
void merge_config(Json& base, const Json& overlay, const std::string& path = "");

/// Applies "a.b.c=value". The value is parsed as JSON when possible and kept as
/// a string otherwise.
void apply_override(Json& config, const std::string& assignment);

/// Reads a JSON config file; errors name the file.
Json load_config_file(const std::string& path);

struct ConfigSources {
  std::optional<std::string> file;
  std::vector<std::string> overrides;
  std::optional<std::string> scenario;
  std::optional<std::string> controller;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

/// defaults <- scenario preset <- file <- --set <- flags.
Json build_config(const ConfigSources& sources);

struct ExperimentSpec {
  Scenario scenario = Scenario::lq_scalar;
  ControllerKind controller = ControllerKind::mppi;
  std::uint64_t seed = 0;
  double duration = 2.0;
  double dt = 0.05;
  std::string out_dir;
  bool plant_noise = false;

  MppiConfig mppi;
  CemConfig cem;
  int cem_horizon = 50;
  int cem_receding_iters = 3;
  Vector cem_initial_std;
  Pi2CmaConfig pi2;
  Vector pi2_initial_std;
  int pi2_iterations = 200;
  double pi2_gain_std = 1.0;

  CartPoleParams cartpole;
  CartPoleCostWeights cartpole_cost;
  Vector cartpole_x0;

  BicycleParams bicycle;
  TrackingWeights tracking;
  std::string track_csv;
  double track_half_width = 1.0;
  ObstacleSet obstacles;
  std::optional<Vector> bicycle_x0;
  double bicycle_finish_tolerance = 0.5;
  double bicycle_max_error = 0.5;

  LqParams lq;
  double lq_x0 = 1.0;
  ControlCostForm lq_cost_form = ControlCostForm::girsanov;

  Vector quadratic_target;
  Vector quadratic_mean;
  Vector quadratic_std;

  /// The effective configuration this spec was built from.
  Json config;

  int steps() const;
};

/// Validates the whole tree and the scenario/controller pairing. Errors name the
/// offending key.
ExperimentSpec spec_from_config(const Json& config);

}  // namespace pathint

#endif  // PATHINT_HARNESS_CONFIG_HPP_
