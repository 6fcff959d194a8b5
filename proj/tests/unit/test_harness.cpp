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
#include <functional>
#include <numbers>
#include <sstream>

#include "pathint/harness/compare.hpp"
#include "pathint/harness/config.hpp"
#include "pathint/harness/experiment.hpp"
#include "pathint/harness/log_io.hpp"
#include "pathint/models/lq.hpp"
#include "pathint/mppi.hpp"

namespace pathint {
namespace {

namespace fs = std::filesystem;

ExperimentSpec spec_with(const std::string& scenario, const std::vector<std::string>& overrides,
                         std::optional<std::string> controller = std::nullopt, std::uint64_t seed = 1) {
  ConfigSources sources;
  sources.scenario = scenario;
  sources.controller = std::move(controller);
  sources.overrides = overrides;
  sources.seed = seed;
  return spec_from_config(build_config(sources));
}

std::string log_text(const TrajectoryLog& log) {
  std::ostringstream out;
  write_log_csv(out, log);
  return out.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pathint_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string expect_config_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  ADD_FAILURE() << "expected ConfigError";
  return {};
}

// Configuration

TEST(Config, DefaultsCoverEverySection) {
  const Json c = default_config();
  for (const char* key : {"scenario", "controller", "seed", "harness", "mppi", "smooth_mppi", "log_mppi",
                          "cem", "pi2_cma", "cartpole", "bicycle", "lq", "cem_quadratic"}) {
    EXPECT_TRUE(c.contains(key)) << key;
  }
  EXPECT_NO_THROW(spec_from_config(c));
}

TEST(Config, UnknownKeysNameTheirPath) {
  Json c = default_config();
  const std::string msg = expect_config_error([&] { merge_config(c, Json{{"mppi", {{"bogus", 1}}}}); });
  EXPECT_NE(msg.find("mppi.bogus"), std::string::npos) << msg;
  EXPECT_NE(expect_config_error([&] { apply_override(c, "harness.nope.deeper=3"); }).find("harness.nope"),
            std::string::npos);
}

TEST(Config, OverridesParseJsonOrFallBackToString) {
  Json c = default_config();
  apply_override(c, "mppi.temperature=0.25");
  apply_override(c, "bicycle.track_csv=tracks/loop.csv");
  apply_override(c, "cartpole.x0=[0,0,3,0]");
  apply_override(c, "harness.plant_noise=true");
  EXPECT_EQ(c["mppi"]["temperature"].get<double>(), 0.25);
  EXPECT_EQ(c["bicycle"]["track_csv"].get<std::string>(), "tracks/loop.csv");
  EXPECT_EQ(c["cartpole"]["x0"].size(), 4u);
  EXPECT_TRUE(c["harness"]["plant_noise"].get<bool>());
  expect_config_error([&] { apply_override(c, "no_equals_sign"); });
  expect_config_error([&] { apply_override(c, "=3"); });
}

TEST(Config, PrecedenceIsPresetFileSetFlags) {
  const fs::path dir = scratch_dir("precedence");
  const fs::path file = dir / "run.json";
  {
    std::ofstream out(file);
    out << R"({"scenario": "lq_scalar", "mppi": {"num_samples": 77, "horizon": 12}, "seed": 4})";
  }
  ConfigSources sources;
  sources.file = file.string();
  sources.overrides = {"mppi.horizon=9"};
  Json c = build_config(sources);
  EXPECT_EQ(c["scenario"], "lq_scalar");
  EXPECT_EQ(c["mppi"]["num_samples"], 77);
  EXPECT_EQ(c["mppi"]["horizon"], 9);
  EXPECT_EQ(c["seed"], 4);
  EXPECT_EQ(c["harness"]["duration"], 2.0);

  sources.seed = 12;
  sources.controller = "cem";
  sources.out_dir = "elsewhere";
  c = build_config(sources);
  EXPECT_EQ(c["seed"], 12);
  EXPECT_EQ(c["controller"], "cem");
  EXPECT_EQ(c["harness"]["out_dir"], "elsewhere");

  sources = {};
  sources.scenario = "cartpole_swingup";
  c = build_config(sources);
  EXPECT_EQ(c["harness"]["dt"], 0.02);
  EXPECT_EQ(c["mppi"]["num_samples"], 1024);
  fs::remove_all(dir);
}

TEST(Config, ValidationErrorsArePathQualified) {
  EXPECT_NE(expect_config_error([] { spec_with("lq_scalar", {"mppi.temperature=0"}); }).find("mppi.temperature"),
            std::string::npos);
  EXPECT_NE(expect_config_error([] { spec_with("lq_scalar", {"mppi.horizon=\"long\""}); }).find("mppi.horizon"),
            std::string::npos);
  EXPECT_NE(expect_config_error([] { spec_with("lq_scalar", {"cem.elite_count=5000"}); }).find("cem.elite_count"),
            std::string::npos);
  expect_config_error([] { spec_with("lq_scalar", {"harness.duration=-1"}); });
  expect_config_error([] { spec_with("cem_quadratic", {}, "mppi"); });
  expect_config_error([] { spec_with("nowhere", {}); });
  expect_config_error([] { spec_with("lq_scalar", {}, "ilqr"); });
  expect_config_error([] { load_config_file("/nonexistent/pathint.json"); });
}

TEST(Config, VariantsSelectTheirMechanism) {
  const auto smooth = spec_with("bicycle_track", {}, "smooth_mppi");
  EXPECT_GT(smooth.mppi.action_rate_weight, 0.0);
  const auto plain = spec_with("bicycle_track", {}, "mppi");
  EXPECT_EQ(plain.mppi.action_rate_weight, 0.0);
  const auto log_variant = spec_with("bicycle_track", {}, "log_mppi");
  EXPECT_EQ(log_variant.mppi.noise, NoiseDistribution::normal_log_normal);
  EXPECT_EQ(spec_with("lq_scalar", {}).steps(), 40);
}

// Logs

TrajectoryLog synthetic_log(int steps, int samples, double dt) {
  TrajectoryLog log;
  log.state_dim = 2;
  log.control_dim = 1;
  log.num_samples = samples;
  for (int j = 0; j < steps; ++j) {
    LogRecord r;
    r.time = j * dt;
    r.state = Vector{{std::sin(0.1 * j), 1.0 / 3.0 + j}};
    r.control = Vector{{-0.1 * j}};
    r.stage_cost = 0.5 + j;
    r.cost_to_go = 10.0 / (j + 1);
    r.diagnostics.num_samples = samples;
    r.diagnostics.ess = samples;
    r.diagnostics.weight_entropy = std::log(static_cast<double>(samples));
    r.diagnostics.max_weight = 1.0 / samples;
    r.diagnostics.free_energy = r.cost_to_go;
    r.diagnostics.cost_mean = 2.0;
    r.diagnostics.cost_min = 1.0;
    r.diagnostics.cost_std = 0.1 * j;
    log.records.push_back(r);
  }
  return log;
}

TEST(LogIo, RoundTripIsExact) {
  const TrajectoryLog log = synthetic_log(30, 64, 0.05);
  std::istringstream in(log_text(log));
  const TrajectoryLog back = read_log_csv(in);
  ASSERT_EQ(back.records.size(), log.records.size());
  EXPECT_EQ(back.state_dim, 2);
  EXPECT_EQ(back.control_dim, 1);
  for (std::size_t j = 0; j < log.records.size(); ++j) {
    EXPECT_EQ(back.records[j].time, log.records[j].time);
    EXPECT_EQ(back.records[j].state, log.records[j].state);
    EXPECT_EQ(back.records[j].control, log.records[j].control);
    EXPECT_EQ(back.records[j].cost_to_go, log.records[j].cost_to_go);
    EXPECT_EQ(back.records[j].diagnostics.cost_std, log.records[j].diagnostics.cost_std);
    EXPECT_EQ(back.records[j].diagnostics.num_samples, 64);
  }
}

TEST(LogIo, HeaderFollowsDocumentedColumns) {
  const std::string text = log_text(synthetic_log(2, 4, 0.1));
  std::istringstream in(text);
  std::string version;
  std::string header;
  std::getline(in, version);
  std::getline(in, header);
  EXPECT_EQ(version, "# pathint-log v1");
  EXPECT_EQ(header,
            "time,x0,x1,u0,stage_cost,cost_to_go,num_samples,ess,weight_entropy,max_weight,"
            "free_energy,cost_mean,cost_min,cost_std");
}

TEST(LogIo, MalformedLogsAreRejected) {
  const std::string good = log_text(synthetic_log(3, 4, 0.1));
  const auto reject = [](const std::string& text) {
    std::istringstream in(text);
    return expect_config_error([&] { read_log_csv(in, "bad.csv"); });
  };
  EXPECT_NE(reject("time,x0\n").find("bad.csv:1"), std::string::npos);
  std::string swapped = good;
  const auto second = swapped.find("\n0.1,");
  ASSERT_NE(second, std::string::npos);
  swapped.replace(second + 1, 3, "0.0");
  EXPECT_NE(reject(swapped).find("strictly increasing"), std::string::npos);
  std::string garbage = good;
  garbage.replace(garbage.rfind(','), 1, ",x");
  EXPECT_NE(reject(garbage).find("bad.csv:5"), std::string::npos);
  std::string short_row = good + "0.5,1\n";
  EXPECT_NE(reject(short_row).find("fields"), std::string::npos);
  expect_config_error([] { read_log_csv("/nonexistent/log.csv"); });
}

// Experiments

TEST(RunExperiment, LqMppiReportsOracleError) {
  const auto spec = spec_with("lq_scalar", {"mppi.num_samples=10000"}, "mppi", 7);
  const auto result = run_experiment(spec);
  ASSERT_FALSE(result.failed) << result.error;
  EXPECT_EQ(result.log.records.size(), 40u);
  const double rel = result.details["relative_error"].get<double>();
  EXPECT_LT(rel, 0.10);
  EXPECT_TRUE(result.metrics.success);
  EXPECT_NEAR(result.details["oracle_control"].get<double>(), -0.9375, 1e-4);
}

TEST(RunExperiment, SameSeedGivesByteIdenticalLogs) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"lq_scalar", "mppi"},      {"lq_scalar", "log_mppi"}, {"bicycle_track", "smooth_mppi"},
      {"bicycle_track", "cem"},   {"bicycle_track", "pi2_cma"}, {"cartpole_swingup", "mppi"},
      {"cem_quadratic", "cem"}};
  for (const auto& [scenario, controller] : cases) {
    const auto spec = spec_with(scenario,
                                {"harness.duration=0.5", "mppi.num_samples=64", "cem.num_samples=32",
                                 "cem.elite_count=4", "cem.max_iters=20", "pi2_cma.num_samples=16",
                                 "pi2_cma.iterations=5", "harness.plant_noise=true"},
                                controller, 3);
    const auto a = run_experiment(spec);
    auto threaded = spec;
    threaded.mppi.num_threads = 3;
    threaded.cem.num_threads = 3;
    threaded.pi2.num_threads = 3;
    const auto b = run_experiment(threaded);
    ASSERT_FALSE(a.failed) << scenario << "/" << controller << ": " << a.error;
    EXPECT_EQ(log_text(a.log), log_text(b.log)) << scenario << "/" << controller;
    const auto other = run_experiment(spec_with(scenario, {"harness.duration=0.5", "mppi.num_samples=64"},
                                                controller, 4));
    if (scenario != "cem_quadratic") {
      EXPECT_NE(log_text(a.log), log_text(other.log)) << scenario << "/" << controller;
    }
  }
}

TEST(RunExperiment, LogCostToGoIsFreeEnergyOfRollouts) {
  LqParams p;
  MppiConfig config;
  config.num_samples = 256;
  config.horizon = 20;
  config.dt = 0.05;
  config.temperature = 0.7;
  MppiController controller(make_lq_model(p), make_lq_cost(p), config, 5);
  double x = 1.0;
  for (int j = 0; j < 10; ++j) {
    const auto step = controller.step(Vector::Constant(1, x), j * 0.05);
    const Vector& g = controller.last_plan()->total_costs;
    const double gmin = g.minCoeff();
    double mean = 0.0;
    for (Eigen::Index k = 0; k < g.size(); ++k) {
      mean += std::exp(-(g[k] - gmin) / config.temperature) / static_cast<double>(g.size());
    }
    const double expected = gmin - config.temperature * std::log(mean);
    EXPECT_NEAR(step.cost_to_go, expected, 1e-9 * std::max(1.0, std::abs(expected)));
    EXPECT_EQ(step.diagnostics.free_energy, step.cost_to_go);
    x += step.control[0] * 0.05;
  }
}

TEST(RunExperiment, TimeColumnMatchesSteps) {
  const auto spec = spec_with("lq_scalar", {"mppi.num_samples=32"});
  const auto result = run_experiment(spec);
  ASSERT_EQ(result.log.records.size(), static_cast<std::size_t>(spec.steps()));
  for (std::size_t j = 0; j < result.log.records.size(); ++j) {
    EXPECT_DOUBLE_EQ(result.log.records[j].time, static_cast<double>(j) * spec.dt);
  }
}

TEST(RunExperiment, PlanningFailureKeepsPartialLog) {
  // Every rollout from this start trips the divergence check.
  auto spec = spec_with("lq_scalar", {"mppi.num_samples=8", "lq.x0=1e200"});
  const auto result = run_experiment(spec);
  EXPECT_TRUE(result.failed);
  EXPECT_FALSE(result.error.empty());
  EXPECT_FALSE(result.metrics.success);
  const Json summary = result.summary(spec);
  EXPECT_TRUE(summary["failed"].get<bool>());
}

TEST(Metrics, SwingupFlagOnSyntheticLog) {
  auto spec = spec_with("cartpole_swingup", {});
  TrajectoryLog log;
  log.state_dim = 4;
  log.control_dim = 1;
  for (int j = 0; j < spec.steps(); ++j) {
    LogRecord r;
    r.time = j * spec.dt;
    const double angle = r.time < 7.5 ? 3.0 : 0.05;
    r.state = Vector{{0.0, 0.0, angle, 0.0}};
    r.control = Vector::Zero(1);
    log.records.push_back(r);
  }
  EXPECT_TRUE(compute_metrics(spec, log).success);
  EXPECT_NEAR(compute_metrics(spec, log).max_tracking_error, 0.05, 1e-12);
  log.records[static_cast<std::size_t>(spec.steps() - 30)].state[2] = 0.15;
  EXPECT_FALSE(compute_metrics(spec, log).success);
  log.records[static_cast<std::size_t>(spec.steps() - 30)].state[2] = 0.05;
  log.records[static_cast<std::size_t>(spec.steps() - 150)].state[2] = 0.15;
  EXPECT_TRUE(compute_metrics(spec, log).success);
  log.records.back().state[2] = 2.0 * std::numbers::pi + 0.05;
  EXPECT_TRUE(compute_metrics(spec, log).success);
}

TEST(Metrics, MeanAbsDeltaU) {
  auto spec = spec_with("lq_scalar", {});
  TrajectoryLog log = synthetic_log(5, 4, 0.05);
  log.state_dim = 1;
  for (auto& r : log.records) {
    r.state = Vector::Zero(1);
  }
  // Controls 0, -0.1, ..., -0.4 change by 0.1 per step.
  EXPECT_NEAR(compute_metrics(spec, log).mean_abs_du, 0.1, 1e-12);
}

TEST(Outputs, RunDirectoryIsSelfDescribing) {
  const fs::path dir = scratch_dir("outputs");
  const auto spec = spec_with("lq_scalar", {"mppi.num_samples=16"});
  const auto result = run_experiment(spec);
  write_experiment_outputs(spec, result, dir.string());
  for (const char* f : {"log.csv", "timing.csv", "summary.json", "config.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  std::ifstream cfg(dir / "config.json");
  const Json echoed = Json::parse(cfg);
  EXPECT_EQ(spec_from_config(echoed).config, spec.config);
  std::ifstream summary_in(dir / "summary.json");
  const Json summary = Json::parse(summary_in);
  for (const char* key : {"success", "accumulated_cost", "max_tracking_error", "mean_plan_ms"}) {
    EXPECT_TRUE(summary.contains(key)) << key;
  }
  const auto back = read_log_csv((dir / "log.csv").string());
  EXPECT_EQ(log_text(back), log_text(result.log));
  fs::remove_all(dir);
}

// Comparison

TEST(Compare, IdenticalSpecsGiveIdenticalRows) {
  const auto spec = spec_with("lq_scalar", {"mppi.num_samples=64"});
  const auto rows = compare_controllers({{"a", spec}, {"b", spec}});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].success, rows[1].success);
  EXPECT_EQ(rows[0].accumulated_cost, rows[1].accumulated_cost);
  EXPECT_EQ(rows[0].max_tracking_error, rows[1].max_tracking_error);
  EXPECT_EQ(rows[0].mean_abs_du, rows[1].mean_abs_du);
}

TEST(Compare, ScenarioMismatchAndSingleSpecRejected) {
  const auto lq = spec_with("lq_scalar", {"mppi.num_samples=8"});
  const auto quad = spec_with("cem_quadratic", {});
  EXPECT_NE(expect_config_error([&] { compare_controllers({{"a", lq}, {"b", quad}}); }).find("scenario"),
            std::string::npos);
  expect_config_error([&] { compare_controllers({{"a", lq}}); });
}

TEST(Compare, AggregateRowIsMeanOfSeeds) {
  std::vector<ComparisonRow> rows;
  for (int s = 1; s <= 3; ++s) {
    ComparisonRow r;
    r.label = "mppi";
    r.seed = std::to_string(s);
    r.success = s == 2 ? 0.0 : 1.0;
    r.accumulated_cost = s * 1.5;
    r.max_tracking_error = 0.1 * s;
    rows.push_back(r);
  }
  ComparisonRow single;
  single.label = "cem";
  single.seed = "1";
  rows.push_back(single);
  const auto out = with_aggregates(rows);
  ASSERT_EQ(out.size(), 5u);
  const auto mean = std::find_if(out.begin(), out.end(), [](const ComparisonRow& r) {
    return r.label == "mppi" && r.seed == "mean";
  });
  ASSERT_NE(mean, out.end());
  EXPECT_NEAR(mean->success, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(mean->accumulated_cost, 3.0, 1e-15);
  EXPECT_NEAR(mean->max_tracking_error, 0.2, 1e-15);
}

TEST(Compare, ColumnSchemaIsFixed) {
  const std::vector<std::string> expected{"label",         "scenario",    "controller",
                                          "seed",          "success",     "accumulated_cost",
                                          "max_tracking_error", "mean_abs_du", "mean_plan_ms",
                                          "p95_plan_ms"};
  EXPECT_EQ(comparison_columns(), expected);
  ComparisonRow r;
  r.label = "x";
  const std::string csv = comparison_csv({r});
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "label,scenario,controller,seed,success,accumulated_cost,max_tracking_error,mean_abs_du,"
            "mean_plan_ms,p95_plan_ms");
  const std::string table = format_comparison_table({r});
  for (const auto& c : expected) {
    EXPECT_NE(table.find(c), std::string::npos) << c;
  }
}

// Diagnosis

TEST(Diagnose, UniformWeightsAreNeverFlagged) {
  const auto d = diagnose_log(synthetic_log(20, 64, 0.1));
  EXPECT_EQ(d.ess_min, 64.0);
  EXPECT_EQ(d.ess_mean, 64.0);
  EXPECT_TRUE(d.flagged_steps.empty());
}

TEST(Diagnose, OneHotStepIsFlaggedAndSummariesRecompute) {
  auto log = synthetic_log(10, 64, 0.1);
  log.records[4].diagnostics.ess = 1.0;
  log.records[4].diagnostics.weight_entropy = 0.0;
  log.records[7].diagnostics.ess = 3.3;
  const auto d = diagnose_log(log);
  EXPECT_EQ(d.flagged_steps, (std::vector<int>{4}));
  double sum = 0.0;
  double min = 1e300;
  for (const auto& r : log.records) {
    sum += r.diagnostics.ess;
    min = std::min(min, r.diagnostics.ess);
  }
  EXPECT_DOUBLE_EQ(d.ess_mean, sum / 10.0);
  EXPECT_EQ(d.ess_min, min);
  EXPECT_EQ(d.ess_final, 64.0);
  EXPECT_EQ(d.entropy_min, 0.0);
  EXPECT_EQ(diagnose_log(log, 0.1).flagged_steps, (std::vector<int>{4, 7}));
  EXPECT_NE(format_diagnosis(d).find("4"), std::string::npos);
}

}  // namespace
}  // namespace pathint
