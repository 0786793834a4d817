// Copyright 2026 The langlimit Authors.
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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "langlimit/errors.h"
#include "langlimit/experiments.h"

namespace {

using langlimit::ExperimentConfig;

int Run(int argc, char** argv) {
  CLI::App app{"Run language-generation experiments."};
  std::string experiment;
  std::string config_path;
  std::optional<std::int64_t> horizon;
  std::optional<std::uint64_t> seed;
  std::string trace_path;
  std::string summary_path;
  bool describe = false;
  bool list = false;
  app.add_option("--experiment", experiment, "experiment id or 'all'");
  app.add_option("--config", config_path, "JSON config record or list");
  app.add_option("--horizon", horizon, "override the horizon");
  app.add_option("--seed", seed, "override the seed");
  app.add_option("--trace", trace_path, "write NDJSON traces here");
  app.add_option("--summary", summary_path, "write the JSON summary here");
  app.add_flag("--describe", describe, "describe the selected experiments");
  app.add_flag("--list", list, "list registered experiments");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : langlimit::kExitInvalidConfig;
  }

  if (list) {
    for (const auto& info : langlimit::registered_experiments()) {
      std::cout << info.id << "\n";
    }
    return langlimit::kExitPass;
  }

  std::vector<ExperimentConfig> configs;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw langlimit::InvalidArgument("cannot read " + config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        throw langlimit::InvalidArgument(std::string("bad JSON: ") + e.what());
      }
      configs = langlimit::expand_configs(j);
      if (!experiment.empty() && experiment != "all") {
        std::erase_if(configs, [&](const ExperimentConfig& c) {
          return c.id != experiment;
        });
      }
    } else if (!experiment.empty()) {
      configs = langlimit::default_configs(experiment);
    } else if (!describe) {
      throw langlimit::InvalidArgument("need --experiment or --config");
    } else {
      configs = langlimit::default_configs("all");
    }
    if (horizon) {
      if (*horizon < 1) {
        throw langlimit::InvalidArgument("horizon must be at least 1");
      }
      for (auto& c : configs) c.horizon = static_cast<std::size_t>(*horizon);
    }
    if (seed) {
      for (auto& c : configs) c.seed = *seed;
    }
    if (configs.empty()) {
      throw langlimit::InvalidArgument("no experiments selected");
    }
  } catch (const langlimit::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return langlimit::kExitInvalidConfig;
  }

  if (describe) {
    for (const auto& c : configs) {
      const auto* info = langlimit::find_experiment(c.id);
      std::cout << c.label << " (horizon "
                << c.horizon.value_or(info->default_horizon)
                << "): " << info->description << "\n";
    }
    return langlimit::kExitPass;
  }

  const auto rows = langlimit::run_experiments(configs);
  try {
    langlimit::emit_summary(
        rows, std::cout,
        summary_path.empty() ? std::nullopt
                             : std::optional<std::string>(summary_path));
    if (!trace_path.empty()) {
      std::ofstream f(trace_path);
      if (!f) throw langlimit::InvalidArgument("cannot write " + trace_path);
      langlimit::write_traces(rows, f);
    }
  } catch (const langlimit::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return langlimit::kExitInvalidConfig;
  }
  return langlimit::exit_status(rows);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return langlimit::kExitInternal;
  }
}
