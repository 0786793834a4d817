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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "langlimit/adversaries.h"
#include "langlimit/engine.h"
#include "langlimit/errors.h"

using namespace langlimit;

namespace {

ClosedFormLanguage P(Element j) { return ClosedFormLanguage::Suffix(j); }

ScriptedSpec Spec(ClosedFormLanguage truth) {
  ScriptedSpec s;
  s.truth = std::move(truth);
  return s;
}

Transcript Stream(const std::vector<Element>& xs) {
  Transcript tr;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    StepRecord r;
    r.t = t;
    r.x = xs[t];
    tr.steps.push_back(r);
  }
  return tr;
}

bool HasKind(const std::vector<Violation>& v, const std::string& kind) {
  for (const auto& x : v) {
    if (x.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("sampleless run against a fixed truth") {
  auto g = intersection_generator(collection_c2());
  RunSpec rs;
  rs.mode = Mode::Sampleless();
  rs.horizon = 100;
  rs.truth = ClosedFormLanguage({7}, std::nullopt, true);
  const auto out = run(*g, nullptr, rs);
  CHECK(out.result.mistakes() == 0);
  CHECK(out.result.observed_convergence == 0);
  CHECK(out.transcript.steps.size() == 100);
}

TEST_CASE("sampleless runs flag repeated outputs") {
  auto g = list_stream({-1, -2, -1, -3});
  RunSpec rs;
  rs.mode = Mode::Sampleless();
  rs.horizon = 4;
  rs.truth = ClosedFormLanguage::Negatives();
  const auto out = run(*g, nullptr, rs);
  CHECK(HasKind(out.result.violations, "InjectivityViolation"));
}

TEST_CASE("level-0 noise generator on one noisy string") {
  ScriptedSpec s = Spec(P(0));
  s.noise = {{0, -1}};
  ScriptedSource src(s);
  auto g = noise_level_generator_ci(0);
  const auto out = run(*g, src, Mode::Noisy(1), 200);
  CHECK(out.result.violations.empty());
  CHECK(out.result.observed_convergence <= 2);
  for (std::size_t t = 2; t < 200; ++t) {
    REQUIRE(out.transcript.steps[t].verdict == Verdict::kCorrect);
  }
}

TEST_CASE("staged replay through the engine") {
  auto g = baseline(Baseline::kMaxPlusOne);
  auto adv = staged_union_adversary();
  const auto out = run(*g, *adv, Mode::Standard(), 1000);
  REQUIRE(out.result.mistakes() >= 10);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(out.result.mistake_times[k] == 2 * k);
  }
  CHECK(out.result.truth_mode == "limit+stage");
}

TEST_CASE("validate_stream examples") {
  ScriptedSource p0(Spec(P(0)));
  std::vector<Element> canonical;
  for (Element x = 0; x < 50; ++x) canonical.push_back(x);
  CHECK(validate_stream(Stream(canonical), p0, Mode::Standard()).empty());

  auto repeat = canonical;
  repeat[10] = 5;
  const auto v = validate_stream(Stream(repeat), p0, Mode::Standard());
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].kind == "RepeatViolation");
  CHECK(v[0].t == 10);
  CHECK(validate_stream(Stream({0, 0, 1, 1, 1, 2}), p0, Mode::Repetition()).empty());

  ScriptedSpec noisy = Spec(P(0));
  noisy.noise = {{0, -1}, {3, -2}};
  ScriptedSource two(noisy);
  std::vector<Element> xs;
  two.Reset();
  for (int k = 0; k < 40; ++k) xs.push_back(two.Next());
  CHECK(HasKind(validate_stream(Stream(xs), two, Mode::Noisy(1)),
                "NoiseBudgetViolation"));
  CHECK(validate_stream(Stream(xs), two, Mode::Noisy(2)).empty());
}

TEST_CASE("validate_stream catches omissions and gaps") {
  ScriptedSpec s = Spec(P(0));
  s.omissions = {3, 4};
  ScriptedSource src(s);
  CHECK(HasKind(validate_stream(Stream({0, 1, 2}), src, Mode::Standard()),
                "OmissionViolation"));
  CHECK(HasKind(validate_stream(Stream({0, 1, 2}), src, Mode::Lossy(1)),
                "OmissionBudgetViolation"));
  CHECK(HasKind(validate_stream(Stream({0, 3}), src, Mode::Lossy(2)),
                "OmissionViolation"));
  ScriptedSource full(Spec(P(0)));
  std::vector<Element> gap;
  for (Element x = 1; x < 40; ++x) gap.push_back(x);
  CHECK(HasKind(validate_stream(Stream(gap), full, Mode::Standard()),
                "CoverageViolation"));
}

TEST_CASE("oracle_answer examples") {
  CHECK(oracle_answer(ClosedFormLanguage::Negatives(), -3));
  CHECK_FALSE(oracle_answer(P(5), 2));
  CHECK(oracle_answer(ClosedFormLanguage({0}, std::nullopt, true), 0));
  ScriptedSource src(Spec(P(5)));
  CHECK(oracle_answer(src, 6));
  auto adv = staged_union_adversary();
  CHECK_THROWS_AS(oracle_answer(*adv, 1), ModeMismatch);
}

TEST_CASE("verdict examples") {
  const ClosedFormLanguage k({5}, std::nullopt, true);
  CHECK(verdict(-4, k, {5, -1}) == Verdict::kCorrect);
  CHECK(verdict(5, k, {5, -1}) == Verdict::kMistake);
  CHECK(verdict(3, k, {5, -1}) == Verdict::kMistake);
  TranscriptLimitLanguage limit(ClosedFormLanguage::Negatives());
  limit.AddSeen(0);
  limit.Exclude(1);
  CHECK(verdict(42, limit, {0}) == Verdict::kUnknown);
  CHECK(verdict(1, limit, {0}) == Verdict::kMistake);
  CHECK(verdict(0, limit, {0}) == Verdict::kMistake);
  CHECK(verdict(-8, limit, {0}) == Verdict::kCorrect);
}

TEST_CASE("mode mismatches are rejected") {
  ScriptedSource src(Spec(P(0)));
  auto g = baseline(Baseline::kMaxPlusOne);
  CHECK_THROWS_AS(run(*g, src, Mode::Feedback(), 10), ModeMismatch);
  auto fb = feedback_union_generator({collection_c2()});
  auto adv = staged_union_adversary();
  RunSpec rs;
  rs.mode = Mode::Feedback();
  rs.horizon = 10;
  CHECK_THROWS_AS(run(*fb, *adv, rs), ModeMismatch);
  rs.mode = Mode::Standard();
  CHECK_THROWS_AS(run(*fb, src, rs), ModeMismatch);
  RunSpec bad;
  bad.horizon = 0;
  CHECK_THROWS_AS(run(*g, src, bad), InvalidArgument);
}

TEST_CASE("feedback budget is enforced by the engine") {
  ScriptedSource src(Spec(P(0)));
  auto toy = toy_one_query();
  RunSpec rs;
  rs.mode = Mode::Feedback(0);
  rs.horizon = 5;
  CHECK_THROWS_AS(run(*toy, src, rs), BudgetViolation);
  rs.mode = Mode::Feedback(1);
  const auto out = run(*toy, src, rs);
  CHECK(out.transcript.steps[0].y == Element{-1});
  CHECK(out.transcript.steps[0].a == false);
  CHECK_FALSE(out.transcript.steps[1].y.has_value());
}

TEST_CASE("modes round-trip through JSON") {
  for (const Mode& m :
       {Mode::Standard(), Mode::Lossy(2), Mode::Lossy(std::nullopt),
        Mode::Noisy(3), Mode::Noisy(1, false), Mode::Sampleless(),
        Mode::Feedback(), Mode::Feedback(1), Mode::Identification(),
        Mode::Repetition()}) {
    const Mode back = ModeFromJson(ToJson(m));
    CHECK(back.ToString() == m.ToString());
  }
}

TEST_CASE("scripted specs round-trip through JSON") {
  ScriptedSpec s = Spec(ClosedFormLanguage({-3, 2}, 7, false));
  s.order = OrderKind::kPermuted;
  s.seed = 9;
  s.noise = {{1, -5}};
  s.omissions = {8};
  const ScriptedSpec back = ScriptedSpecFromJson(ToJson(s));
  CHECK(ToJson(back).dump() == ToJson(s).dump());
}

TEST_CASE("traces are NDJSON and deterministic") {
  auto trace = [] {
    ScriptedSpec s = Spec(ClosedFormLanguage({-4, 1}, 6, false));
    s.order = OrderKind::kPermuted;
    s.seed = 17;
    ScriptedSource src(s);
    auto g = baseline(Baseline::kFollowSuffix);
    const auto out = run(*g, src, Mode::Standard(), 50);
    std::ostringstream os;
    nlohmann::ordered_json header;
    header["generator"] = g->Name();
    write_trace(os, header, out);
    return os.str();
  };
  const std::string a = trace();
  CHECK(a == trace());
  std::istringstream in(a);
  std::string line;
  std::vector<nlohmann::json> recs;
  while (std::getline(in, line)) recs.push_back(nlohmann::json::parse(line));
  REQUIRE(recs.size() == 52);
  CHECK(recs.front()["type"] == "header");
  CHECK(recs.back()["type"] == "summary");
  for (std::size_t k = 1; k + 1 < recs.size(); ++k) {
    for (const char* key : {"t", "x", "y", "a", "z", "verdict"}) {
      REQUIRE(recs[k].contains(key));
    }
    REQUIRE(recs[k]["t"] == k - 1);
  }
}
