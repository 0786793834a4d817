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

#ifndef LANGLIMIT_ENGINE_H_
#define LANGLIMIT_ENGINE_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "langlimit/collections.h"
#include "langlimit/generators.h"
#include "langlimit/language.h"
#include "langlimit/source.h"

namespace langlimit {

struct Mode {
  enum class Kind {
    kStandard,
    kLossy,
    kNoisy,
    kSampleless,
    kFeedback,
    kIdentification,
    kRepetition
  };
  Kind kind = Kind::kStandard;
  // lossy: omission budget (nullopt = infinite); noisy: noise budget;
  // feedback: query budget (nullopt = unlimited).
  std::optional<std::size_t> level;
  bool known = false;  // noisy: whether the level is known

  static Mode Standard() { return {}; }
  static Mode Lossy(std::optional<std::size_t> i) {
    return {Kind::kLossy, i, false};
  }
  static Mode Noisy(std::size_t n, bool known = true) {
    return {Kind::kNoisy, n, known};
  }
  static Mode Sampleless() { return {Kind::kSampleless, std::nullopt, false}; }
  static Mode Feedback(std::optional<std::size_t> budget = std::nullopt) {
    return {Kind::kFeedback, budget, false};
  }
  static Mode Identification() {
    return {Kind::kIdentification, std::nullopt, false};
  }
  static Mode Repetition() { return {Kind::kRepetition, std::nullopt, false}; }

  std::string ToString() const;
};

nlohmann::ordered_json ToJson(const Mode& m);
Mode ModeFromJson(const nlohmann::json& j);

enum class Verdict { kCorrect, kMistake, kUnknown };
const char* ToString(Verdict v);

struct StepRecord {
  std::size_t t = 0;
  std::optional<Element> x;
  std::optional<Element> y;
  std::optional<bool> a;
  Element z = 0;
  Verdict verdict = Verdict::kUnknown;
};

struct Violation {
  std::string kind;  // RepeatViolation, NoiseBudgetViolation, ...
  std::size_t t = 0;
  std::string detail;
};

struct RunResult {
  std::vector<std::size_t> mistake_times;
  std::size_t observed_convergence = 0;
  // Distinct revealed strings at the convergence step (repetition mode).
  std::size_t distinct_at_convergence = 0;
  std::size_t unknown_count = 0;
  std::vector<Violation> violations;
  // "exact", "limit", "limit+stage" (open final stage) or "index".
  std::string truth_mode = "exact";
  bool no_trigger = false;
  std::size_t certified_mistakes = 0;
  std::size_t no_trigger_mistakes = 0;
  std::vector<std::size_t> trigger_times;
  std::vector<std::optional<std::size_t>> declared_noise;
  // Revealed strings outside the truth (limit truth: excluded ones).
  std::size_t non_members_revealed = 0;

  std::size_t mistakes() const { return mistake_times.size(); }
};

struct Transcript {
  std::vector<StepRecord> steps;
};

struct RunOutput {
  Transcript transcript;
  RunResult result;
};

using AnyStrategy = std::variant<std::unique_ptr<Generator>,
                                 std::unique_ptr<SamplelessSeq>,
                                 std::unique_ptr<FeedbackGenerator>>;

struct RunSpec {
  Mode mode;
  std::size_t horizon = 1000;
  // Sampleless runs without a source judge against this.
  std::optional<ClosedFormLanguage> truth;
  // Identification: the indexed collection.
  std::optional<CollectionSpec> collection;
};

// Strategy and source must fit the mode; throws ModeMismatch otherwise.
// `source` may be null for sampleless runs.
RunOutput run(Generator& g, Source& source, const RunSpec& spec);
RunOutput run(SamplelessSeq& g, Source* source, const RunSpec& spec);
RunOutput run(FeedbackGenerator& g, Source& source, const RunSpec& spec);
RunOutput run(AnyStrategy& g, Source* source, const RunSpec& spec);

// Convenience.
RunOutput run(Generator& g, Source& source, const Mode& mode,
              std::size_t horizon);

std::vector<Violation> validate_stream(const Transcript& transcript,
                                       const ScriptedSource& source,
                                       const Mode& mode);

// Throws ModeMismatch for limit truths (adaptive sources).
bool oracle_answer(const Source& source, Element y);
bool oracle_answer(const ClosedFormLanguage& truth, Element y);

Verdict verdict(Element z, const ClosedFormLanguage& truth,
                const ElementSet& seen);
Verdict verdict(Element z, const TranscriptLimitLanguage& truth,
                const ElementSet& seen);

// Fills mistake times, convergence and unknown count from the verdicts.
void summarize(const Transcript& transcript, RunResult* result);

// NDJSON: header, one record per step, summary.
nlohmann::ordered_json StepJson(const StepRecord& r);
nlohmann::ordered_json ResultJson(const RunResult& r);
void write_trace(std::ostream& out, const nlohmann::ordered_json& header,
                 const RunOutput& run);

}  // namespace langlimit

#endif  // LANGLIMIT_ENGINE_H_
