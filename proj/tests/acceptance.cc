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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "langlimit/adversaries.h"
#include "langlimit/collections.h"
#include "langlimit/engine.h"
#include "langlimit/experiments.h"
#include "langlimit/generators.h"
#include "support/wide_oracle.h"
#include "support/window_oracle.h"

using namespace langlimit;

namespace {

// Pinned tolerances.
constexpr std::size_t kM = 10;
constexpr std::size_t kLongHorizon = 10'000;
constexpr std::size_t kShortHorizon = 1'000;
constexpr double kRunSeconds = 1.0;
constexpr double kSuiteSeconds = 60.0;
constexpr int kMaxSample = 3;

struct Verdicts {
  int failed = 0;
  void Report(int n, const std::string& name, bool ok,
              const std::string& detail) {
    std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", n, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
};

double Seconds(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - from)
      .count();
}

bool CleanFrom(const Transcript& tr, std::size_t from) {
  for (const auto& step : tr.steps) {
    if (step.t >= from && step.verdict != Verdict::kCorrect) return false;
  }
  return true;
}

SummaryRow Experiment(const std::string& id, std::size_t horizon,
                      std::uint64_t seed = 0) {
  ExperimentConfig c;
  c.id = id;
  c.label = id;
  c.horizon = horizon;
  c.seed = seed;
  c.min_mistakes = kM;
  return run_experiment(c);
}

std::string RowDetail(const SummaryRow& r) {
  std::string out = std::to_string(r.runs) + " runs, status " +
                    std::to_string(r.status);
  if (!r.detail.empty()) out += ", " + r.detail;
  return out;
}

bool RowOk(const SummaryRow& r, std::size_t min_runs) {
  return r.pass && r.status == kExitPass && r.runs >= min_runs;
}

// 1: suffix follower on A u P_i.
void SuffixFollower(Verdicts* v) {
  std::mt19937_64 rng(20260101);
  std::size_t runs = 0;
  bool ok = true;
  double slowest = 0;
  for (Element i : {0, 1, 7, 20, 50}) {
    ElementSet a;
    for (Element x = -20; x <= 20; ++x) {
      if (uniform_below(rng, 4) == 0) a.insert(x);
    }
    const ClosedFormLanguage k(a, i, false);
    const std::size_t bound = static_cast<std::size_t>(i) + a.size();
    for (int order = 0; order <= 5; ++order) {
      ScriptedSpec spec;
      spec.truth = k;
      spec.order = order == 0 ? OrderKind::kCanonical : OrderKind::kPermuted;
      spec.seed = 1000 + order;
      ScriptedSource src(spec);
      auto g = baseline(Baseline::kFollowSuffix);
      const auto start = std::chrono::steady_clock::now();
      RunOutput r = run(*g, src, Mode::Standard(), kShortHorizon);
      const double s = Seconds(start);
      slowest = std::max(slowest, s);
      ok = ok && s < kRunSeconds && r.result.violations.empty() &&
           CleanFrom(r.transcript, bound);
      ++runs;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu runs, slowest %.3fs", runs, slowest);
  v->Report(1, "follow-suffix on A u P_i", ok, buf);
}

// 2: staged adversary against three generators.
void StagedUnion(Verdicts* v) {
  bool ok = true;
  std::string detail;
  for (const std::string name :
       {"max-plus-one", "follow-suffix", "omission-ci:0"}) {
    auto g = make_generator(name);
    auto adv = staged_union_adversary();
    RunOutput r = run(*g, *adv, Mode::Standard(), kLongHorizon);
    const auto& res = r.result;
    bool good = res.certified_mistakes >= kM && res.violations.empty();
    for (std::size_t k = 1; k <= kM; ++k) {
      good = good && adv->sent().count(-static_cast<Element>(k)) > 0;
    }
    if (name == "max-plus-one") {
      good = good && res.mistake_times.size() >= kM;
      for (std::size_t k = 0; good && k < kM; ++k) {
        good = res.mistake_times[k] == 2 * k;
      }
    }
    ok = ok && good;
    detail += name + "=" + std::to_string(res.certified_mistakes) + " ";
  }
  v->Report(2, "staged adversary, certified mistakes", ok, detail);
}

// 4: closure and uniform check against both brute-force oracles.
void ClosureOracles(Verdicts* v) {
  const std::vector<std::string> names = {
      "C1",     "C2",     "P-family", "P-prefixes",  "thm5.4",
      "C^i:0",  "C^i:1",  "C^i:2",    "B^i:0",       "B^i:1",
      "B^i:2",  "suffix-at:0", "suffix-at:5", "suffix-at:10",
      "suffix-at:20"};
  std::size_t checks = 0;
  std::size_t bad = 0;
  std::string first_bad;
  auto note = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++bad;
      if (first_bad.empty()) first_bad = what;
    }
  };
  const auto narrow_sets = oracle::SmallSets(kMaxSample);
  const auto wide_sets = wide::SmallSets(kMaxSample);
  for (const auto& name : names) {
    const CollectionSpec c = named_collection(name);
    const oracle::WindowOracle narrow(c);
    for (const auto& s : narrow_sets) {
      const ClosureResult r = closure(c, s);
      const bool cons = narrow.Consistent(s);
      note(consistent(c, s) == cons, name + " consistent");
      if (!cons) {
        note(r.kind == ClosureKind::kNoConsistent, name + " closure kind");
        continue;
      }
      note(r.is_infinite() == narrow.ClosureInfinite(s), name + " infinite");
      ElementSet window;
      for (Element x = oracle::kLo; x <= oracle::kHi; ++x) {
        if (r.Contains(x)) window.insert(x);
      }
      note(window == narrow.ClosureWindow(s), name + " narrow window");
    }
    const wide::WideOracle w(c);
    for (const auto& s : wide_sets) {
      const wide::Answer a = w.Closure(s);
      const ClosureResult r = closure(c, s);
      note(consistent(c, s) == a.consistent, name + " wide consistent");
      if (!a.consistent) continue;
      note(r.is_infinite() == a.infinite(), name + " wide infinite");
      std::uint64_t window = 0;
      for (Element x = wide::kLo; x <= wide::kHi; ++x) {
        if (r.Contains(x)) window |= wide::Bit(x);
      }
      note(window == a.window, name + " wide window");
      if (r.is_infinite()) {
        note(r.language->tail_start().has_value() == a.tail, name + " tail");
        note(r.language->include_negatives() == a.neg, name + " negatives");
      }
    }
    note(uniform_without_samples_check(c) == narrow.ClosureInfinite({}),
         name + " uniform (narrow)");
    note(uniform_without_samples_check(c) == w.Closure({}).infinite(),
         name + " uniform (wide)");
  }
  std::string detail = std::to_string(names.size()) + " collections, " +
                       std::to_string(checks - bad) + "/" +
                       std::to_string(checks) + " agree";
  if (!first_bad.empty()) detail += ", first disagreement: " + first_bad;
  v->Report(4, "closure oracles", bad == 0, detail);
}

// 13: whole suite twice, byte-identical traces.
void Determinism(Verdicts* v) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> dumps;
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<ExperimentConfig> configs;
    for (const auto& e : registered_experiments()) {
      for (auto& c : default_configs(e.id)) configs.push_back(std::move(c));
    }
    const auto rows = run_experiments(configs);
    std::ostringstream os;
    write_traces(rows, os);
    dumps.push_back(os.str());
  }
  const double s = Seconds(start);
  const bool same = dumps[0] == dumps[1] && !dumps[0].empty();
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu trace bytes, %s, %.1fs for two passes",
                dumps[0].size(), same ? "identical" : "different", s);
  v->Report(13, "deterministic suite", same && s < kSuiteSeconds, buf);
}

void Row(Verdicts* v, int n, const std::string& name, const std::string& id,
         std::size_t horizon, std::size_t min_runs) {
  const SummaryRow r = Experiment(id, horizon);
  v->Report(n, name, RowOk(r, min_runs), RowDetail(r));
}

}  // namespace

int main() {
  Verdicts v;
  SuffixFollower(&v);
  StagedUnion(&v);
  Row(&v, 3, "noisy from sampleless and back", "alg1-2-equiv", kShortHorizon,
      11);
  ClosureOracles(&v);
  Row(&v, 5, "omissions for C2", "thm4.5-omissions", kShortHorizon, 20);
  Row(&v, 6, "omission hierarchy", "thm4.8-omit-i", kLongHorizon, 3 * 13);
  Row(&v, 7, "noise hierarchy", "thm5.2-noise-i", kShortHorizon, 3 * 11);
  Row(&v, 8, "noise sensitivity", "thm5.4-sensitivity", kShortHorizon, 5 * 7);
  Row(&v, 9, "feedback union", "alg4-feedback", kShortHorizon, 20);
  Row(&v, 10, "query stripping", "alg5-queries", kShortHorizon, 24);
  Row(&v, 11, "identifier", "alg6-identify", kShortHorizon, 3);
  Row(&v, 12, "repetition wrapper", "appendixA-repetition", kShortHorizon,
      2 * 2 * 10);
  Determinism(&v);
  std::printf("%d failed\n", v.failed);
  return v.failed == 0 ? 0 : 1;
}
