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

#ifndef PATHINT_HARNESS_LOG_IO_HPP_
#define PATHINT_HARNESS_LOG_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "pathint/controller.hpp"

namespace pathint {

inline constexpr const char* kLogVersionLine = "# pathint-log v1";

/// Column names of the trajectory CSV, in order:
///   time, x0..x{n-1}, u0..u{m-1}, stage_cost, cost_to_go, num_samples, ess,
///   weight_entropy, max_weight, free_energy, cost_mean, cost_min, cost_std
std::vector<std::string> log_columns(int state_dim, int control_dim);

/// Writes the version line, the header and one row per record. Plan times are
/// not part of this file, so equal runs give byte-identical output.
void write_log_csv(std::ostream& out, const TrajectoryLog& log);
void write_log_csv(const std::string& path, const TrajectoryLog& log);

/// step,time,plan_time_ms
void write_timing_csv(const std::string& path, const TrajectoryLog& log);

/// Parses a log written by write_log_csv. Throws ConfigError naming the line on
/// malformed input.
TrajectoryLog read_log_csv(const std::string& path);
TrajectoryLog read_log_csv(std::istream& in, const std::string& name = "<stream>");

}  // namespace pathint

#endif  // PATHINT_HARNESS_LOG_IO_HPP_
