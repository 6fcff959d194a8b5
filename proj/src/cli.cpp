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

#include "pathint/cli.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "pathint/harness/compare.hpp"
#include "pathint/harness/config.hpp"
#include "pathint/harness/experiment.hpp"
#include "pathint/harness/log_io.hpp"

namespace pathint {

namespace {

struct CommonOptions {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string scenario;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--set", o.sets, "Override one key, e.g. --set mppi.temperature=0.5 (repeatable)");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out-dir", o.out_dir, "Output directory (default: $PIC_OUT_DIR, else ./pathint_out)");
  cmd->add_option("--scenario", o.scenario, "cartpole_swingup | bicycle_track | lq_scalar | cem_quadratic");
}

ConfigSources sources_for(const CommonOptions& o, const std::string& config_file,
                          const std::optional<std::string>& controller) {
  ConfigSources s;
  if (!config_file.empty()) {
    s.file = config_file;
  }
  s.overrides = o.sets;
  if (!o.scenario.empty()) {
    s.scenario = o.scenario;
  }
  s.controller = controller;
  s.seed = o.seed;
  if (!o.out_dir.empty()) {
    s.out_dir = o.out_dir;
  }
  return s;
}

std::string resolve_out_dir(const std::string& configured) {
  if (!configured.empty()) {
    return configured;
  }
  if (const char* env = std::getenv("PIC_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "pathint_out";
}

int cmd_run(const CommonOptions& o, const std::string& controller, bool dump, std::ostream& out,
            std::ostream& err) {
  const Json config = build_config(
      sources_for(o, o.config, controller.empty() ? std::nullopt : std::optional<std::string>(controller)));
  ExperimentSpec spec = spec_from_config(config);
  if (dump) {
    out << config.dump(2) << '\n';
    return kExitOk;
  }
  spec.out_dir = resolve_out_dir(spec.out_dir);
  const ExperimentResult result = run_experiment(spec);
  write_experiment_outputs(spec, result, spec.out_dir);
  out << result.summary(spec).dump(2) << '\n';
  out << "outputs written to " << spec.out_dir << '\n';
  if (result.failed) {
    err << "run failed: " << result.error << '\n';
    return kExitRunFailed;
  }
  return kExitOk;
}

int cmd_compare(const CommonOptions& o, const std::vector<std::string>& configs,
                const std::vector<std::string>& controllers, const std::string& seeds, std::ostream& out) {
  std::vector<std::string> files = configs.empty() ? std::vector<std::string>{""} : configs;
  std::vector<std::optional<std::string>> ctrls;
  for (const std::string& c : controllers) {
    ctrls.emplace_back(c);
  }
  if (ctrls.empty()) {
    ctrls.emplace_back(std::nullopt);
  }
  std::vector<std::optional<std::uint64_t>> seed_list;
  if (!seeds.empty()) {
    for (std::uint64_t s : parse_seed_list(seeds)) {
      seed_list.emplace_back(s);
    }
  } else {
    seed_list.emplace_back(o.seed);
  }

  std::vector<LabeledSpec> specs;
  for (const std::string& file : files) {
    for (const auto& ctrl : ctrls) {
      std::string label;
      if (!file.empty()) {
        label = std::filesystem::path(file).stem().string();
      }
      if (ctrl) {
        label = label.empty() ? *ctrl : label + "-" + *ctrl;
      }
      for (const auto& seed : seed_list) {
        CommonOptions per = o;
        per.seed = seed;
        const Json config = build_config(sources_for(per, file, ctrl));
        ExperimentSpec spec = spec_from_config(config);
        specs.push_back({label.empty() ? to_string(spec.controller) : label, std::move(spec)});
      }
    }
  }
  const std::string out_dir = resolve_out_dir(o.out_dir.empty() ? specs.front().spec.out_dir : o.out_dir);
  const std::vector<ComparisonRow> rows = compare_controllers(specs, out_dir);
  std::filesystem::create_directories(out_dir);
  write_comparison_csv((std::filesystem::path(out_dir) / "comparison.csv").string(), rows);
  const std::string table = format_comparison_table(rows);
  std::ofstream((std::filesystem::path(out_dir) / "comparison.txt")) << table;
  out << table;
  return kExitOk;
}

int cmd_diagnose(const std::string& path, double fraction, std::ostream& out) {
  const TrajectoryLog log = read_log_csv(path);
  out << format_diagnosis(diagnose_log(log, fraction));
  return kExitOk;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError(fmt::format("--seeds: '{}' is not a non-negative integer", s));
    }
    return std::stoull(s);
  };
  std::vector<std::uint64_t> seeds;
  const std::size_t range = text.find("..");
  if (range != std::string::npos) {
    const std::uint64_t lo = number(text.substr(0, range));
    const std::uint64_t hi = number(text.substr(range + 2));
    if (hi < lo) {
      throw ConfigError(fmt::format("--seeds: empty range '{}'", text));
    }
    for (std::uint64_t s = lo; s <= hi; ++s) {
      seeds.push_back(s);
    }
    return seeds;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    seeds.push_back(number(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return seeds;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pathint: path-integral control experiments"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string run_controller;
  bool dump = false;
  CLI::App* run = app.add_subcommand("run", "Run one experiment and write its log and summary");
  run->add_option("--config", run_opts.config, "JSON configuration file");
  add_common(run, run_opts);
  run->add_option("--controller", run_controller, "mppi | smooth_mppi | log_mppi | cem | pi2_cma");
  run->add_flag("--dump-config", dump, "Print the effective configuration and exit");

  CommonOptions cmp_opts;
  std::vector<std::string> cmp_configs;
  std::vector<std::string> cmp_controllers;
  std::string seeds;
  CLI::App* compare = app.add_subcommand("compare", "Run several experiments and tabulate their metrics");
  compare->add_option("configs", cmp_configs, "JSON configuration files, one experiment each");
  add_common(compare, cmp_opts);
  compare->add_option("--controller", cmp_controllers, "Controllers to compare (repeatable or comma-separated)")
      ->delimiter(',');
  compare->add_option("--seeds", seeds, "Seed sweep, 'a..b' or 'a,b,c'");

  std::string log_path;
  double fraction = 0.05;
  CLI::App* diagnose = app.add_subcommand("diagnose", "Summarize the sampling diagnostics of a log");
  diagnose->add_option("log", log_path, "log.csv written by run")->required();
  diagnose->add_option("--flag-fraction", fraction, "Flag steps with ESS below this fraction of K");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (run->parsed()) {
      return cmd_run(run_opts, run_controller, dump, out, err);
    }
    if (compare->parsed()) {
      return cmd_compare(cmp_opts, cmp_configs, cmp_controllers, seeds, out);
    }
    return cmd_diagnose(log_path, fraction, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRunFailed;
  }
}

}  // namespace pathint
