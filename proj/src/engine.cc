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

#include "langlimit/engine.h"

#include <algorithm>
#include <map>

#include "langlimit/adversaries.h"
#include "langlimit/errors.h"

namespace langlimit {
namespace {

const char* KindName(Mode::Kind k) {
  switch (k) {
    case Mode::Kind::kStandard:
      return "standard";
    case Mode::Kind::kLossy:
      return "lossy";
    case Mode::Kind::kNoisy:
      return "noisy";
    case Mode::Kind::kSampleless:
      return "sampleless";
    case Mode::Kind::kFeedback:
      return "feedback";
    case Mode::Kind::kIdentification:
      return "identification";
    case Mode::Kind::kRepetition:
      return "repetition";
  }
  return "?";
}

bool IsPlain(const Mode& m) {
  return m.kind == Mode::Kind::kStandard || m.kind == Mode::Kind::kLossy ||
         m.kind == Mode::Kind::kNoisy || m.kind == Mode::Kind::kRepetition;
}

void CheckHorizon(const RunSpec& spec) {
  if (spec.horizon < 1) throw InvalidArgument("horizon must be at least 1");
}

// Final pass for runs against a staged adversary.
void JudgeAdaptive(const StagedAdversary& adv,
                   const std::vector<bool>& z_seen, Transcript* tr,
                   RunResult* result) {
  const auto& limit = adv.limit();
  for (auto& step : tr->steps) {
    if (z_seen[step.t]) {
      step.verdict = Verdict::kMistake;
      continue;
    }
    switch (limit.Status(step.z)) {
      case Membership::kIn:
        step.verdict = Verdict::kCorrect;
        break;
      case Membership::kOut:
        step.verdict = Verdict::kMistake;
        break;
      case Membership::kUnknown:
        step.verdict = Verdict::kUnknown;
        break;
    }
  }
  result->truth_mode = "limit";
  result->trigger_times = adv.trigger_times();
  for (std::size_t t : result->trigger_times) {
    if (t < tr->steps.size() &&
        tr->steps[t].verdict == Verdict::kMistake) {
      ++result->certified_mistakes;
    }
  }
  for (const auto& s : adv.stages()) {
    result->declared_noise.push_back(s.declared_noise);
  }
  const std::size_t last_index = adv.stages().size() - 1;
  const StageInfo& last = adv.stages().back();
  if (!last.trigger) {
    result->no_trigger = true;
    result->truth_mode = "limit+stage";
    for (std::size_t t = last.start; t < tr->steps.size(); ++t) {
      auto& step = tr->steps[t];
      const bool ok = adv.InStage(last_index, step.z) && !z_seen[t];
      step.verdict = ok ? Verdict::kCorrect : Verdict::kMistake;
      if (!ok) ++result->no_trigger_mistakes;
    }
  }
  for (const auto& step : tr->steps) {
    if (limit.Status(*step.x) == Membership::kOut) {
      ++result->non_members_revealed;
    }
  }
}

}  // namespace

std::string Mode::ToString() const {
  std::string out = KindName(kind);
  switch (kind) {
    case Kind::kLossy:
      out += "(" + (level ? std::to_string(*level) : std::string("inf")) + ")";
      break;
    case Kind::kNoisy:
      out += "(" + std::to_string(level.value_or(0)) +
             (known ? ", known" : ", unknown") + ")";
      break;
    case Kind::kFeedback:
      out += "(" + (level ? std::to_string(*level) : std::string("unlimited")) +
             ")";
      break;
    default:
      break;
  }
  return out;
}

nlohmann::ordered_json ToJson(const Mode& m) {
  nlohmann::ordered_json j;
  j["kind"] = KindName(m.kind);
  if (m.level) {
    j["level"] = *m.level;
  } else {
    j["level"] = nullptr;
  }
  if (m.kind == Mode::Kind::kNoisy) j["known"] = m.known;
  return j;
}

Mode ModeFromJson(const nlohmann::json& j) {
  try {
    const std::string kind =
        j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
    Mode m;
    bool found = false;
    for (auto k : {Mode::Kind::kStandard, Mode::Kind::kLossy,
                   Mode::Kind::kNoisy, Mode::Kind::kSampleless,
                   Mode::Kind::kFeedback, Mode::Kind::kIdentification,
                   Mode::Kind::kRepetition}) {
      if (kind == KindName(k)) {
        m.kind = k;
        found = true;
      }
    }
    if (!found) throw InvalidArgument("unknown mode '" + kind + "'");
    if (j.is_object()) {
      if (j.contains("level") && !j.at("level").is_null()) {
        const auto level = j.at("level").get<std::int64_t>();
        if (level < 0) throw InvalidArgument("mode level must be >= 0");
        m.level = static_cast<std::size_t>(level);
      }
      m.known = j.value("known", false);
    }
    if (m.kind == Mode::Kind::kNoisy && !m.level) {
      throw InvalidArgument("noisy mode needs a level");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad mode record: ") + e.what());
  }
}

const char* ToString(Verdict v) {
  switch (v) {
    case Verdict::kCorrect:
      return "Correct";
    case Verdict::kMistake:
      return "Mistake";
    case Verdict::kUnknown:
      return "Unknown";
  }
  return "?";
}

bool oracle_answer(const ClosedFormLanguage& truth, Element y) {
  return truth.Contains(y);
}

bool oracle_answer(const Source& source, Element y) {
  const auto* scripted = dynamic_cast<const ScriptedSource*>(&source);
  if (!scripted) {
    throw ModeMismatch("membership queries need an exact truth; " +
                       source.Name() + " only has a limit language");
  }
  return oracle_answer(scripted->spec().truth, y);
}

Verdict verdict(Element z, const ClosedFormLanguage& truth,
                const ElementSet& seen) {
  return truth.Contains(z) && seen.count(z) == 0 ? Verdict::kCorrect
                                                 : Verdict::kMistake;
}

Verdict verdict(Element z, const TranscriptLimitLanguage& truth,
                const ElementSet& seen) {
  if (seen.count(z) > 0) return Verdict::kMistake;
  switch (truth.Status(z)) {
    case Membership::kIn:
      return Verdict::kCorrect;
    case Membership::kOut:
      return Verdict::kMistake;
    case Membership::kUnknown:
      break;
  }
  return Verdict::kUnknown;
}

void summarize(const Transcript& transcript, RunResult* result) {
  result->mistake_times.clear();
  result->unknown_count = 0;
  for (const auto& step : transcript.steps) {
    if (step.verdict == Verdict::kMistake) {
      result->mistake_times.push_back(step.t);
    }
    if (step.verdict == Verdict::kUnknown) ++result->unknown_count;
  }
  result->observed_convergence =
      result->mistake_times.empty() ? 0 : result->mistake_times.back() + 1;
  ElementSet distinct;
  for (const auto& step : transcript.steps) {
    if (step.t >= result->observed_convergence) break;
    if (step.x) distinct.insert(*step.x);
  }
  result->distinct_at_convergence = distinct.size();
}

std::vector<Violation> validate_stream(const Transcript& transcript,
                                       const ScriptedSource& source,
                                       const Mode& mode) {
  std::vector<Violation> out;
  const ScriptedSpec& spec = source.spec();
  ElementSet seen;
  std::size_t noise = 0;
  for (const auto& step : transcript.steps) {
    if (!step.x) continue;
    const Element x = *step.x;
    if (!seen.insert(x).second) {
      if (mode.kind != Mode::Kind::kRepetition) {
        out.push_back({"RepeatViolation", step.t,
                       "value " + std::to_string(x) + " repeated"});
      }
      continue;
    }
    if (!spec.truth.Contains(x)) {
      ++noise;
      const std::size_t budget =
          mode.kind == Mode::Kind::kNoisy ? mode.level.value_or(0) : 0;
      if (noise > budget) {
        out.push_back({"NoiseBudgetViolation", step.t,
                       std::to_string(noise) + " non-members, budget " +
                           std::to_string(budget)});
      }
    }
    if (spec.truth.Contains(x) && source.omitted(x)) {
      out.push_back({"OmissionViolation", step.t,
                     "declared omission " + std::to_string(x) + " revealed"});
    }
  }
  const bool omits = !spec.omissions.empty() || spec.omission_stride > 1;
  if (omits) {
    if (mode.kind != Mode::Kind::kLossy) {
      out.push_back({"OmissionViolation", 0,
                     "source omits strings outside lossy mode"});
    } else if (mode.level) {
      if (spec.omission_stride > 1 || spec.omissions.size() > *mode.level) {
        out.push_back({"OmissionBudgetViolation", 0,
                       "more omissions than the budget " +
                           std::to_string(*mode.level)});
      }
    }
  }
  // Coverage: low canonical indices must have appeared.
  std::size_t distinct_budget = transcript.steps.size();
  if (spec.repetitions) {
    distinct_budget /= static_cast<std::size_t>(spec.max_repeat);
  }
  std::size_t slack = spec.noise.size();
  if (spec.order == OrderKind::kPermuted) slack += spec.block;
  const std::size_t half = distinct_budget / 2;
  const std::size_t bound = half > slack ? half - slack : 0;
  for (std::size_t k = 0; k < bound; ++k) {
    const Element x = spec.truth.At(k);
    if (source.omitted(x)) continue;
    if (seen.count(x) == 0) {
      out.push_back({"CoverageViolation", k,
                     "member " + std::to_string(x) + " not revealed"});
      break;
    }
  }
  return out;
}

RunOutput run(Generator& g, Source& source, const RunSpec& spec) {
  CheckHorizon(spec);
  if (!IsPlain(spec.mode)) {
    throw ModeMismatch("a plain generator cannot run in " +
                       spec.mode.ToString() + " mode");
  }
  const auto* scripted = dynamic_cast<const ScriptedSource*>(&source);
  const auto* staged = dynamic_cast<const StagedAdversary*>(&source);
  if (!scripted && !staged) {
    throw ModeMismatch("unsupported source " + source.Name());
  }
  g.Reset();
  source.Reset();
  RunOutput out;
  out.transcript.steps.reserve(spec.horizon);
  ElementSet seen;
  std::vector<bool> z_seen;
  z_seen.reserve(spec.horizon);
  for (std::size_t t = 0; t < spec.horizon; ++t) {
    StepRecord r;
    r.t = t;
    r.x = source.Next();
    seen.insert(*r.x);
    r.z = g.Step(*r.x);
    source.Observe(r.z);
    z_seen.push_back(seen.count(r.z) > 0);
    if (scripted) r.verdict = verdict(r.z, scripted->spec().truth, seen);
    out.transcript.steps.push_back(r);
  }
  if (scripted) {
    out.result.violations =
        validate_stream(out.transcript, *scripted, spec.mode);
    for (Element x : seen) {
      if (!scripted->spec().truth.Contains(x)) {
        ++out.result.non_members_revealed;
      }
    }
  } else {
    ElementSet check;
    for (const auto& step : out.transcript.steps) {
      if (!check.insert(*step.x).second) {
        out.result.violations.push_back(
            {"RepeatViolation", step.t,
             "value " + std::to_string(*step.x) + " repeated"});
      }
    }
    JudgeAdaptive(*staged, z_seen, &out.transcript, &out.result);
  }
  summarize(out.transcript, &out.result);
  return out;
}

RunOutput run(SamplelessSeq& g, Source* source, const RunSpec& spec) {
  CheckHorizon(spec);
  if (spec.mode.kind != Mode::Kind::kSampleless) {
    throw ModeMismatch("a sampleless stream needs sampleless mode");
  }
  std::optional<ClosedFormLanguage> truth = spec.truth;
  if (!truth && source) {
    const auto* scripted = dynamic_cast<const ScriptedSource*>(source);
    if (!scripted) throw ModeMismatch("sampleless runs need an exact truth");
    truth = scripted->spec().truth;
  }
  if (!truth) throw ModeMismatch("sampleless run without a truth");
  g.Reset();
  RunOutput out;
  ElementSet emitted;
  for (std::size_t t = 0; t < spec.horizon; ++t) {
    StepRecord r;
    r.t = t;
    r.z = g.Next();
    if (!emitted.insert(r.z).second) {
      r.verdict = Verdict::kMistake;
      out.result.violations.push_back(
          {"InjectivityViolation", t,
           "value " + std::to_string(r.z) + " emitted twice"});
    } else {
      r.verdict = truth->Contains(r.z) ? Verdict::kCorrect : Verdict::kMistake;
    }
    out.transcript.steps.push_back(r);
  }
  summarize(out.transcript, &out.result);
  return out;
}

RunOutput run(FeedbackGenerator& g, Source& source, const RunSpec& spec) {
  CheckHorizon(spec);
  const bool identify = spec.mode.kind == Mode::Kind::kIdentification;
  if (spec.mode.kind != Mode::Kind::kFeedback && !identify) {
    throw ModeMismatch("a feedback generator needs feedback or "
                       "identification mode");
  }
  const auto* scripted = dynamic_cast<const ScriptedSource*>(&source);
  if (!scripted) {
    throw ModeMismatch("feedback runs need a scripted source; " +
                       source.Name() + " has no exact truth to query");
  }
  const ExplicitCountable* indexed = nullptr;
  if (identify) {
    if (!spec.collection) {
      throw ModeMismatch("identification needs a collection");
    }
    indexed = std::get_if<ExplicitCountable>(&spec.collection->variant());
    if (!indexed) {
      throw ModeMismatch("identification needs an explicit collection");
    }
  }
  const ClosedFormLanguage& truth = scripted->spec().truth;
  std::map<Element, bool> index_ok;
  auto judge_index = [&](Element z) {
    auto it = index_ok.find(z);
    if (it != index_ok.end()) return it->second;
    bool ok = z >= 0 &&
              (!indexed->size || static_cast<std::size_t>(z) < *indexed->size) &&
              indexed->rule(static_cast<std::size_t>(z)) == truth;
    index_ok.emplace(z, ok);
    return ok;
  };

  g.Reset();
  source.Reset();
  RunOutput out;
  ElementSet seen;
  std::size_t queries = 0;
  for (std::size_t t = 0; t < spec.horizon; ++t) {
    StepRecord r;
    r.t = t;
    r.x = source.Next();
    seen.insert(*r.x);
    r.y = g.Query(*r.x);
    if (r.y) {
      ++queries;
      if (spec.mode.kind == Mode::Kind::kFeedback && spec.mode.level &&
          queries > *spec.mode.level) {
        throw BudgetViolation(g.Name() + " exceeded its query budget");
      }
      r.a = oracle_answer(truth, *r.y);
    }
    r.z = g.Output(r.a);
    if (identify) {
      r.verdict = judge_index(r.z) ? Verdict::kCorrect : Verdict::kMistake;
    } else {
      r.verdict = verdict(r.z, truth, seen);
    }
    out.transcript.steps.push_back(r);
  }
  // The query mode says nothing about the stream; validate it against what
  // the source declares.
  const ScriptedSpec& ss = scripted->spec();
  Mode stream_mode = Mode::Standard();
  if (!ss.noise.empty()) stream_mode = Mode::Noisy(ss.noise.size());
  if (!ss.omissions.empty() || ss.omission_stride > 1) {
    stream_mode = Mode::Lossy(std::nullopt);
  }
  if (ss.repetitions) stream_mode = Mode::Repetition();
  out.result.violations = validate_stream(out.transcript, *scripted,
                                          stream_mode);
  if (identify) out.result.truth_mode = "index";
  summarize(out.transcript, &out.result);
  return out;
}

RunOutput run(AnyStrategy& g, Source* source, const RunSpec& spec) {
  return std::visit(
      [&](auto& strategy) -> RunOutput {
        using T = std::decay_t<decltype(*strategy)>;
        if constexpr (std::is_same_v<T, SamplelessSeq>) {
          return run(*strategy, source, spec);
        } else {
          if (!source) throw ModeMismatch("this strategy needs a source");
          return run(*strategy, *source, spec);
        }
      },
      g);
}

RunOutput run(Generator& g, Source& source, const Mode& mode,
              std::size_t horizon) {
  RunSpec spec;
  spec.mode = mode;
  spec.horizon = horizon;
  return run(g, source, spec);
}

nlohmann::ordered_json StepJson(const StepRecord& r) {
  nlohmann::ordered_json j;
  j["t"] = r.t;
  if (r.x) {
    j["x"] = *r.x;
  } else {
    j["x"] = nullptr;
  }
  if (r.y) {
    j["y"] = *r.y;
  } else {
    j["y"] = nullptr;
  }
  if (r.a) {
    j["a"] = *r.a ? "Yes" : "No";
  } else {
    j["a"] = nullptr;
  }
  j["z"] = r.z;
  j["verdict"] = ToString(r.verdict);
  return j;
}

nlohmann::ordered_json ResultJson(const RunResult& r) {
  nlohmann::ordered_json j;
  j["mistakes"] = r.mistake_times.size();
  j["mistake_times"] = r.mistake_times;
  j["observed_convergence"] = r.observed_convergence;
  j["distinct_at_convergence"] = r.distinct_at_convergence;
  j["unknown_count"] = r.unknown_count;
  auto violations = nlohmann::ordered_json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"kind", v.kind}, {"t", v.t}, {"detail", v.detail}});
  }
  j["violations"] = std::move(violations);
  j["truth_mode"] = r.truth_mode;
  j["no_trigger"] = r.no_trigger;
  j["certified_mistakes"] = r.certified_mistakes;
  j["no_trigger_mistakes"] = r.no_trigger_mistakes;
  j["trigger_times"] = r.trigger_times;
  if (!r.declared_noise.empty()) {
    auto noise = nlohmann::ordered_json::array();
    for (const auto& n : r.declared_noise) {
      if (n) {
        noise.push_back(*n);
      } else {
        noise.push_back(nullptr);
      }
    }
    j["declared_noise"] = std::move(noise);
  }
  j["non_members_revealed"] = r.non_members_revealed;
  return j;
}

void write_trace(std::ostream& out, const nlohmann::ordered_json& header,
                 const RunOutput& run) {
  nlohmann::ordered_json h;
  h["type"] = "header";
  for (auto it = header.begin(); it != header.end(); ++it) {
    h[it.key()] = it.value();
  }
  out << h.dump() << "\n";
  for (const auto& step : run.transcript.steps) {
    out << StepJson(step).dump() << "\n";
  }
  nlohmann::ordered_json s;
  s["type"] = "summary";
  s["result"] = ResultJson(run.result);
  out << s.dump() << "\n";
}

}  // namespace langlimit
