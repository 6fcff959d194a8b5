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

#ifndef PATHINT_HARNESS_COMPARE_HPP_
#define PATHINT_HARNESS_COMPARE_HPP_

#include <string>
#include <vector>

#include "pathint/harness/experiment.hpp"

namespace pathint {

struct LabeledSpec {
  std::string label;
  ExperimentSpec spec;
};

/// One line of the comparison table. Aggregate rows carry seed "mean" and the
/// mean of the per-seed values; success becomes the success fraction.
struct ComparisonRow {
  std::string label;
  std::string scenario;
  std::string controller;
  std::string seed;
  double success = 0.0;
  double accumulated_cost = 0.0;
  double max_tracking_error = 0.0;
  double mean_abs_du = 0.0;
  double mean_plan_ms = 0.0;
  double p95_plan_ms = 0.0;
};

/// label, scenario, controller, seed, success, accumulated_cost,
/// max_tracking_error, mean_abs_du, mean_plan_ms, p95_plan_ms
const std::vector<std::string>& comparison_columns();

ComparisonRow make_row(const std::string& label, const ExperimentSpec& spec, const RunMetrics& metrics);

/// Appends one "mean" row per label that has more than one per-seed row.
std::vector<ComparisonRow> with_aggregates(std::vector<ComparisonRow> rows);

/// Runs every spec (they must share a scenario) and returns per-run rows plus
/// aggregates. With a non-empty `out_dir` each run's outputs go to
/// out_dir/run<index>_<label>_seed<seed>/.
std::vector<ComparisonRow> compare_controllers(const std::vector<LabeledSpec>& specs,
                                               const std::string& out_dir = "");

void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);
std::string format_comparison_table(const std::vector<ComparisonRow>& rows);

struct LogDiagnosis {
  int steps = 0;
  int num_samples = 0;
  double ess_min = 0.0;
  double ess_mean = 0.0;
  double ess_final = 0.0;
  double entropy_min = 0.0;
  double entropy_mean = 0.0;
  double entropy_final = 0.0;
  double flag_fraction = 0.05;
  /// Row indices whose ESS is below flag_fraction * num_samples.
  std::vector<int> flagged_steps;
};

LogDiagnosis diagnose_log(const TrajectoryLog& log, double flag_fraction = 0.05);
std::string format_diagnosis(const LogDiagnosis& d);

}  // namespace pathint

#endif  // PATHINT_HARNESS_COMPARE_HPP_
