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

#include "pathint/harness/log_io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace pathint {

namespace {

constexpr const char* kTrailingColumns[] = {"stage_cost", "cost_to_go", "num_samples", "ess",
                                            "weight_entropy", "max_weight", "free_energy",
                                            "cost_mean", "cost_min", "cost_std"};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

double parse_double(const std::string& text, const std::string& where) {
  if (text == "nan") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (text == "inf") {
    return std::numeric_limits<double>::infinity();
  }
  if (text == "-inf") {
    return -std::numeric_limits<double>::infinity();
  }
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", where, text));
  }
  return value;
}

}  // namespace

std::vector<std::string> log_columns(int state_dim, int control_dim) {
  std::vector<std::string> cols{"time"};
  for (int i = 0; i < state_dim; ++i) {
    cols.push_back(fmt::format("x{}", i));
  }
  for (int i = 0; i < control_dim; ++i) {
    cols.push_back(fmt::format("u{}", i));
  }
  for (const char* c : kTrailingColumns) {
    cols.emplace_back(c);
  }
  return cols;
}

void write_log_csv(std::ostream& out, const TrajectoryLog& log) {
  out << kLogVersionLine << '\n';
  const auto cols = log_columns(log.state_dim, log.control_dim);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out << (j ? "," : "") << cols[j];
  }
  out << '\n';
  fmt::memory_buffer row;
  for (const LogRecord& r : log.records) {
    row.clear();
    fmt::format_to(std::back_inserter(row), "{}", r.time);
    for (Eigen::Index i = 0; i < r.state.size(); ++i) {
      fmt::format_to(std::back_inserter(row), ",{}", r.state[i]);
    }
    for (Eigen::Index i = 0; i < r.control.size(); ++i) {
      fmt::format_to(std::back_inserter(row), ",{}", r.control[i]);
    }
    const SamplingDiagnostics& d = r.diagnostics;
    fmt::format_to(std::back_inserter(row), ",{},{},{},{},{},{},{},{},{},{}\n", r.stage_cost,
                   r.cost_to_go, d.num_samples, d.ess, d.weight_entropy, d.max_weight,
                   d.free_energy, d.cost_mean, d.cost_min, d.cost_std);
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_log_csv(const std::string& path, const TrajectoryLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(fmt::format("cannot write '{}'", path));
  }
  write_log_csv(out, log);
}

void write_timing_csv(const std::string& path, const TrajectoryLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(fmt::format("cannot write '{}'", path));
  }
  out << "step,time,plan_time_ms\n";
  for (std::size_t j = 0; j < log.records.size(); ++j) {
    out << fmt::format("{},{},{}\n", j, log.records[j].time, log.records[j].plan_time_ms);
  }
}

TrajectoryLog read_log_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(fmt::format("cannot open log '{}'", path));
  }
  return read_log_csv(in, path);
}

TrajectoryLog read_log_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line) || line != kLogVersionLine) {
    throw ConfigError(fmt::format("{}:1: missing '{}' version line", name, kLogVersionLine));
  }
  if (!std::getline(in, line)) {
    throw ConfigError(fmt::format("{}:2: missing header row", name));
  }
  const auto header = split(line);
  TrajectoryLog log;
  for (const std::string& h : header) {
    if (h.size() > 1 && h[0] == 'x' && h.find_first_not_of("0123456789", 1) == std::string::npos) {
      ++log.state_dim;
    } else if (h.size() > 1 && h[0] == 'u' && h.find_first_not_of("0123456789", 1) == std::string::npos) {
      ++log.control_dim;
    }
  }
  if (header != log_columns(log.state_dim, log.control_dim)) {
    throw ConfigError(fmt::format("{}:2: unexpected header '{}'", name, line));
  }
  int line_no = 2;
  double previous_time = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto fields = split(line);
    const std::string where = fmt::format("{}:{}", name, line_no);
    if (fields.size() != header.size()) {
      throw ConfigError(fmt::format("{}: expected {} fields, got {}", where, header.size(), fields.size()));
    }
    std::size_t c = 0;
    LogRecord r;
    r.time = parse_double(fields[c++], where);
    if (!(r.time > previous_time)) {
      throw ConfigError(fmt::format("{}: time column must be strictly increasing", where));
    }
    previous_time = r.time;
    r.state.resize(log.state_dim);
    for (int i = 0; i < log.state_dim; ++i) {
      r.state[i] = parse_double(fields[c++], where);
    }
    r.control.resize(log.control_dim);
    for (int i = 0; i < log.control_dim; ++i) {
      r.control[i] = parse_double(fields[c++], where);
    }
    r.stage_cost = parse_double(fields[c++], where);
    r.cost_to_go = parse_double(fields[c++], where);
    const double samples = parse_double(fields[c++], where);
    if (!(samples >= 0.0) || samples != std::floor(samples)) {
      throw ConfigError(fmt::format("{}: num_samples must be a non-negative integer", where));
    }
    r.diagnostics.num_samples = static_cast<int>(samples);
    r.diagnostics.ess = parse_double(fields[c++], where);
    r.diagnostics.weight_entropy = parse_double(fields[c++], where);
    r.diagnostics.max_weight = parse_double(fields[c++], where);
    r.diagnostics.free_energy = parse_double(fields[c++], where);
    r.diagnostics.cost_mean = parse_double(fields[c++], where);
    r.diagnostics.cost_min = parse_double(fields[c++], where);
    r.diagnostics.cost_std = parse_double(fields[c++], where);
    log.num_samples = r.diagnostics.num_samples;
    log.records.push_back(std::move(r));
  }
  return log;
}

}  // namespace pathint
