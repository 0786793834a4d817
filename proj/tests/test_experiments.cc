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

#include "langlimit/errors.h"
#include "langlimit/experiments.h"

using namespace langlimit;
using nlohmann::json;

namespace {

ExperimentConfig One(const json& j) {
  const auto v = expand_configs(j);
  REQUIRE(v.size() == 1);
  return v[0];
}

std::string Traces(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  write_traces(rows, os);
  return os.str();
}

}  // namespace

TEST_CASE("registry holds the twelve experiments") {
  const std::vector<std::string> want = {
      "alg1-2-equiv",     "alg3-chain",     "alg4-feedback",
      "alg5-queries",     "alg6-identify",  "appendixA-repetition",
      "thm3.1",           "thm4.3-check",   "thm4.5-omissions",
      "thm4.8-omit-i",    "thm5.2-noise-i", "thm5.4-sensitivity"};
  std::vector<std::string> got;
  for (const auto& info : registered_experiments()) {
    got.push_back(info.id);
    CHECK_FALSE(info.description.empty());
  }
  CHECK(got == want);
  CHECK(find_experiment("thm3.1")->default_horizon == 10000);
  CHECK(find_experiment("alg3-chain")->default_horizon == 500);
  CHECK(find_experiment("alg6-identify")->default_horizon == 1000);
  CHECK(find_experiment("nope") == nullptr);
}

TEST_CASE("run_experiment examples") {
  const auto a = run_experiment(One(
      {{"id", "thm3.1"}, {"generator", "max_plus_one"}, {"horizon", 1000},
       {"M", 10}}));
  CHECK(a.pass);
  CHECK(a.status == kExitPass);
  CHECK(a.mistakes >= 10);

  const auto b = run_experiment(
      One({{"id", "alg3-chain"}, {"K", 7}, {"horizon", 500}}));
  CHECK(b.pass);
  CHECK(b.convergence <= 7);

  const auto c =
      run_experiment(One({{"id", "thm4.3-check"}, {"collection", "C2"}}));
  CHECK(c.pass);
  CHECK(c.detail.find("C2=infinite") != std::string::npos);
}

TEST_CASE("assertion failures and bad configs map to exit codes") {
  // A generator that does not generate on A u P_i fails the positive check.
  const auto fail = run_experiment(One(
      {{"id", "thm3.1"}, {"generator", "min-minus-one"}, {"horizon", 200}}));
  CHECK_FALSE(fail.pass);
  CHECK(fail.status == kExitAssertion);
  const auto wrong = run_experiment(
      One({{"id", "thm4.3-check"}, {"collection", "C1"}, {"expect", true}}));
  CHECK(wrong.status == kExitAssertion);
  const auto bad = run_experiment(
      One({{"id", "thm3.1"}, {"generator", "nonsense"}, {"horizon", 10}}));
  CHECK(bad.status == kExitInvalidConfig);
  const auto badc = run_experiment(
      One({{"id", "thm4.3-check"}, {"collection", "C9"}}));
  CHECK(badc.status == kExitInvalidConfig);
  CHECK_THROWS_AS(expand_configs({{"id", "thm9"}}), InvalidArgument);
  CHECK_THROWS_AS(expand_configs({{"id", "thm3.1"}, {"horizon", 0}}),
                  InvalidArgument);
  CHECK_THROWS_AS(expand_configs({{"horizon", 10}}), InvalidArgument);
  CHECK_THROWS_AS(expand_configs({{"id", "thm3.1"}, {"matrix", {{"i", 3}}}}),
                  InvalidArgument);
}

TEST_CASE("matrix expansion") {
  const auto v = expand_configs(
      {{"id", "thm4.8-omit-i"},
       {"seed", 4},
       {"matrix", {{"i", {0, 1}}, {"generator", {"omission-ci:0", "max-plus-one"}}}}});
  REQUIRE(v.size() == 4);
  std::set<std::string> labels;
  for (const auto& c : v) {
    CHECK(c.seed == 4);
    CHECK(c.params.contains("i"));
    CHECK(c.params.contains("generator"));
    labels.insert(c.label);
  }
  CHECK(labels.size() == 4);
  CHECK(labels.count("thm4.8-omit-i[generator=omission-ci:0,i=0]") == 1);
  const auto list = expand_configs(json::array(
      {{{"id", "alg3-chain"}}, {{"id", "thm4.3-check"}}}));
  CHECK(list.size() == 2);
}

TEST_CASE("summary table, JSON and exit status") {
  SummaryRow pass;
  pass.id = pass.label = "alg3-chain";
  pass.pass = true;
  std::ostringstream os;
  emit_summary({pass}, os, std::nullopt);
  CHECK(os.str().find("PASS") != std::string::npos);
  CHECK(exit_status({pass}) == kExitPass);
  SummaryRow fail = pass;
  fail.id = fail.label = "thm3.1";
  fail.pass = false;
  fail.status = kExitAssertion;
  CHECK(exit_status({pass, fail}) == kExitAssertion);
  SummaryRow broken = fail;
  broken.status = kExitInternal;
  CHECK(exit_status({pass, fail, broken}) == kExitInternal);
  const auto j = summary_json({pass, fail});
  CHECK(j.size() == 2);
  CHECK(j[1]["status"] == 1);
  std::ostringstream empty;
  try {
    emit_summary({}, empty, std::nullopt);
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()) == "no experiments selected");
  }
}

TEST_CASE("rows are ordered by id") {
  auto configs = default_configs("alg6-identify");
  const auto more = default_configs("alg3-chain");
  configs.insert(configs.end(), more.begin(), more.end());
  const auto rows = run_experiments(configs);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].id == "alg3-chain");
  CHECK(rows[1].id == "alg6-identify");
  CHECK_THROWS_AS(default_configs("nope"), InvalidArgument);
  CHECK(default_configs("all").size() == 12);
}

TEST_CASE("factories") {
  for (const std::string g :
       {"max-plus-one", "min_minus_one", "follow-suffix", "omission-ci:2",
        "noise-level-ci:0", "sensitivity-gi:3", "alg1:C2",
        "alg5:toy-one-query", "alg7:follow-suffix"}) {
    CHECK(make_generator(g) != nullptr);
  }
  CHECK(make_generator(json{{"name", "omission-ci"}, {"params", {{"i", 1}}}})
            ->Name() == "omission-ci:1");
  CHECK(make_generator(json{{"name", "noise_level_ci"}, {"params", {{"i", 2}}}})
            ->Name() == "noise-level-ci:2");
  CHECK_THROWS_AS(make_generator("omission-ci:x"), InvalidArgument);
  CHECK_THROWS_AS(make_generator("alg1:C1"), InvalidArgument);
  for (const std::string s :
       {"staged-union", "omission:1", "noise-composed:2", "sensitivity-noise"}) {
    CHECK(make_source(s)->adaptive());
  }
  const json scripted = {{"kind", "scripted"},
                         {"truth", {{"finite_part", {1}}, {"include_negatives", true}}}};
  auto src = make_source(scripted);
  src->Reset();
  CHECK(src->Next() == 1);
}

TEST_CASE("traces are deterministic") {
  const auto configs = default_configs("thm5.2-noise-i");
  const auto a = run_experiments(configs);
  const auto b = run_experiments(configs);
  CHECK(a[0].pass);
  CHECK(Traces(a) == Traces(b));
  ExperimentConfig other = configs[0];
  other.seed = 5;
  CHECK(Traces(run_experiments({other})) != Traces(a));
}
