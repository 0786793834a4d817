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

#ifndef LANGLIMIT_EXPERIMENTS_H_
#define LANGLIMIT_EXPERIMENTS_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "langlimit/engine.h"
#include "langlimit/generators.h"
#include "langlimit/source.h"

namespace langlimit {

struct ExperimentConfig {
  std::string id;
  std::optional<std::size_t> horizon;  // default per experiment
  std::uint64_t seed = 0;
  std::size_t min_mistakes = 10;       // M
  nlohmann::json params = nlohmann::json::object();
  std::string label;                   // id plus matrix coordinates
};

struct TraceRun {
  nlohmann::ordered_json header;
  RunOutput output;
};

// Process exit codes.
enum ExitStatus : int {
  kExitPass = 0,
  kExitAssertion = 1,
  kExitInvalidConfig = 2,
  kExitInternal = 3,
};

struct SummaryRow {
  std::string id;
  std::string label;
  bool pass = false;
  int status = kExitPass;
  std::size_t runs = 0;
  std::size_t mistakes = 0;
  std::size_t convergence = 0;
  double runtime_ms = 0;
  std::string detail;
  std::vector<TraceRun> traces;
};

struct ExperimentInfo {
  std::string id;
  std::string description;
  std::size_t default_horizon;
};

const std::vector<ExperimentInfo>& registered_experiments();
const ExperimentInfo* find_experiment(const std::string& id);

// Never throws: failures land in the row's status.
SummaryRow run_experiment(const ExperimentConfig& config);

// Runs all configs (in parallel) and returns rows ordered by id, then label.
std::vector<SummaryRow> run_experiments(
    const std::vector<ExperimentConfig>& configs);

// One config record or an array of them; "matrix" is expanded into the
// cartesian product of its value lists. Throws InvalidArgument.
std::vector<ExperimentConfig> expand_configs(const nlohmann::json& j);

// Default config for an id ("all" gives every registered id).
std::vector<ExperimentConfig> default_configs(const std::string& id);

// Generator names: max-plus-one, min-minus-one, follow-suffix,
// omission-ci:i, noise-level-ci:i, sensitivity-gi:i, alg1:<collection>,
// alg5:toy-one-query, alg7:<name>.
std::unique_ptr<Generator> make_generator(const nlohmann::json& spec);

// "staged-union", "omission:i", "noise-composed:i", "sensitivity-noise", or
// a scripted record {"kind": "scripted", ...}.
std::unique_ptr<Source> make_source(const nlohmann::json& spec);

std::string summary_table(const std::vector<SummaryRow>& rows);
nlohmann::ordered_json summary_json(const std::vector<SummaryRow>& rows);
// Writes the table, and the JSON summary when `summary_path` is set.
// Throws InvalidArgument("no experiments selected") on empty input.
void emit_summary(const std::vector<SummaryRow>& rows, std::ostream& table,
                  const std::optional<std::string>& summary_path);
// Worst status across rows.
int exit_status(const std::vector<SummaryRow>& rows);

// NDJSON of every row's traces, in row order.
void write_traces(const std::vector<SummaryRow>& rows, std::ostream& out);

}  // namespace langlimit

#endif  // LANGLIMIT_EXPERIMENTS_H_
