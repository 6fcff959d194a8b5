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

#include "pathint/harness/compare.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

namespace pathint {

const std::vector<std::string>& comparison_columns() {
  static const std::vector<std::string> columns{
      "label",        "scenario",     "controller",  "seed",         "success",
      "accumulated_cost", "max_tracking_error", "mean_abs_du", "mean_plan_ms", "p95_plan_ms"};
  return columns;
}

ComparisonRow make_row(const std::string& label, const ExperimentSpec& spec, const RunMetrics& metrics) {
  ComparisonRow row;
  row.label = label;
  row.scenario = to_string(spec.scenario);
  row.controller = to_string(spec.controller);
  row.seed = std::to_string(spec.seed);
  row.success = metrics.success ? 1.0 : 0.0;
  row.accumulated_cost = metrics.accumulated_cost;
  row.max_tracking_error = metrics.max_tracking_error;
  row.mean_abs_du = metrics.mean_abs_du;
  row.mean_plan_ms = metrics.mean_plan_ms;
  row.p95_plan_ms = metrics.p95_plan_ms;
  return row;
}

std::vector<ComparisonRow> with_aggregates(std::vector<ComparisonRow> rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<ComparisonRow>> groups;
  for (const ComparisonRow& r : rows) {
    if (!groups.count(r.label)) {
      order.push_back(r.label);
    }
    groups[r.label].push_back(r);
  }
  for (const std::string& label : order) {
    const auto& g = groups[label];
    if (g.size() < 2) {
      continue;
    }
    ComparisonRow mean = g.front();
    mean.seed = "mean";
    const double n = static_cast<double>(g.size());
    auto average = [&](double ComparisonRow::*field) {
      double total = 0.0;
      for (const ComparisonRow& r : g) {
        total += r.*field;
      }
      return total / n;
    };
    mean.success = average(&ComparisonRow::success);
    mean.accumulated_cost = average(&ComparisonRow::accumulated_cost);
    mean.max_tracking_error = average(&ComparisonRow::max_tracking_error);
    mean.mean_abs_du = average(&ComparisonRow::mean_abs_du);
    mean.mean_plan_ms = average(&ComparisonRow::mean_plan_ms);
    mean.p95_plan_ms = average(&ComparisonRow::p95_plan_ms);
    rows.push_back(mean);
  }
  return rows;
}

std::vector<ComparisonRow> compare_controllers(const std::vector<LabeledSpec>& specs,
                                               const std::string& out_dir) {
  if (specs.size() < 2) {
    throw ConfigError("compare needs at least two experiment specs");
  }
  for (const LabeledSpec& s : specs) {
    if (s.spec.scenario != specs.front().spec.scenario) {
      throw ConfigError(fmt::format("scenario mismatch: '{}' runs {} but '{}' runs {}", specs.front().label,
                                    to_string(specs.front().spec.scenario), s.label,
                                    to_string(s.spec.scenario)));
    }
  }
  std::vector<ComparisonRow> rows;
  for (std::size_t j = 0; j < specs.size(); ++j) {
    const LabeledSpec& s = specs[j];
    const ExperimentResult result = run_experiment(s.spec);
    if (!out_dir.empty()) {
      const auto dir = std::filesystem::path(out_dir) / fmt::format("run{}_{}_seed{}", j, s.label, s.spec.seed);
      write_experiment_outputs(s.spec, result, dir.string());
    }
    rows.push_back(make_row(s.label, s.spec, result.metrics));
  }
  return with_aggregates(std::move(rows));
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out;
  const auto& cols = comparison_columns();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out += (j ? "," : "") + cols[j];
  }
  out += '\n';
  for (const ComparisonRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.label, r.scenario, r.controller, r.seed,
                       r.success, r.accumulated_cost, r.max_tracking_error, r.mean_abs_du,
                       r.mean_plan_ms, r.p95_plan_ms);
  }
  return out;
}

void write_comparison_csv(const std::string& path, const std::vector<ComparisonRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(fmt::format("cannot write '{}'", path));
  }
  out << comparison_csv(rows);
}

std::string format_comparison_table(const std::vector<ComparisonRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back(comparison_columns());
  for (const ComparisonRow& r : rows) {
    cells.push_back({r.label, r.scenario, r.controller, r.seed, fmt::format("{:.2f}", r.success),
                     fmt::format("{:.4g}", r.accumulated_cost), fmt::format("{:.4g}", r.max_tracking_error),
                     fmt::format("{:.4g}", r.mean_abs_du), fmt::format("{:.3f}", r.mean_plan_ms),
                     fmt::format("{:.3f}", r.p95_plan_ms)});
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      out += fmt::format("{:<{}}", cells[r][c], width[c] + (c + 1 < cells[r].size() ? 2 : 0));
    }
    while (!out.empty() && out.back() == ' ') {
      out.pop_back();
    }
    out += '\n';
  }
  return out;
}

LogDiagnosis diagnose_log(const TrajectoryLog& log, double flag_fraction) {
  if (log.records.empty()) {
    throw ConfigError("log has no rows");
  }
  LogDiagnosis d;
  d.steps = static_cast<int>(log.records.size());
  d.num_samples = log.num_samples;
  d.flag_fraction = flag_fraction;
  d.ess_min = std::numeric_limits<double>::infinity();
  d.entropy_min = std::numeric_limits<double>::infinity();
  for (int j = 0; j < d.steps; ++j) {
    const SamplingDiagnostics& s = log.records[static_cast<std::size_t>(j)].diagnostics;
    d.ess_min = std::min(d.ess_min, s.ess);
    d.ess_mean += s.ess;
    d.entropy_min = std::min(d.entropy_min, s.weight_entropy);
    d.entropy_mean += s.weight_entropy;
    if (s.ess < flag_fraction * s.num_samples) {
      d.flagged_steps.push_back(j);
    }
  }
  d.ess_mean /= d.steps;
  d.entropy_mean /= d.steps;
  d.ess_final = log.records.back().diagnostics.ess;
  d.entropy_final = log.records.back().diagnostics.weight_entropy;
  return d;
}

std::string format_diagnosis(const LogDiagnosis& d) {
  std::string out;
  out += fmt::format("steps: {}\nnum_samples: {}\n", d.steps, d.num_samples);
  out += fmt::format("ess: min {:.6g} mean {:.6g} final {:.6g}\n", d.ess_min, d.ess_mean, d.ess_final);
  out += fmt::format("weight_entropy: min {:.6g} mean {:.6g} final {:.6g}\n", d.entropy_min, d.entropy_mean,
                     d.entropy_final);
  out += fmt::format("flagged steps (ess < {} * K): {}\n", d.flag_fraction, d.flagged_steps.size());
  for (int j : d.flagged_steps) {
    out += fmt::format("  step {}\n", j);
  }
  return out;
}

}  // namespace pathint
