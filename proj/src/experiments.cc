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

#include "langlimit/experiments.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <set>
#include <sstream>

#include "langlimit/adversaries.h"
#include "langlimit/collections.h"
#include "langlimit/errors.h"

namespace langlimit {
namespace {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

// Accumulates checks over the runs of one experiment.
struct Outcome {
  bool pass = true;
  std::size_t runs = 0;
  std::size_t mistakes = 0;
  std::size_t convergence = 0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  std::vector<TraceRun> traces;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 8) failures.push_back(what);
    }
  }
  void Add(const std::string& label, OJson header, RunOutput out) {
    ++runs;
    mistakes += out.result.mistakes();
    convergence = std::max(convergence, out.result.observed_convergence);
    header["run"] = label;
    traces.push_back({std::move(header), std::move(out)});
  }
};

struct Context {
  const ExperimentConfig& config;
  std::size_t horizon;
  std::size_t m;
};

std::optional<int> ParseLevel(const std::string& name,
                              const std::string& prefix) {
  if (name.rfind(prefix, 0) != 0) return std::nullopt;
  try {
    std::size_t used = 0;
    const int v = std::stoi(name.substr(prefix.size()), &used);
    if (used + prefix.size() != name.size() || v < 0) {
      throw InvalidArgument("bad level in '" + name + "'");
    }
    return v;
  } catch (const std::logic_error&) {
    throw InvalidArgument("bad level in '" + name + "'");
  }
}

std::string NameOf(const Json& spec) {
  std::string name;
  if (spec.is_string()) {
    name = spec.get<std::string>();
  } else if (spec.is_object() && spec.contains("name")) {
    name = spec.at("name").get<std::string>();
    if (spec.contains("params") && spec.at("params").contains("i")) {
      name += ":" + std::to_string(spec.at("params").at("i").get<int>());
    }
  } else {
    throw InvalidArgument("expected a name or {name, params} record");
  }
  std::replace(name.begin(), name.end(), '_', '-');
  return name;
}

ScriptedSpec Scripted(ClosedFormLanguage truth, std::uint64_t seed = 0,
                      bool permuted = false) {
  ScriptedSpec s;
  s.truth = std::move(truth);
  s.order = permuted ? OrderKind::kPermuted : OrderKind::kCanonical;
  s.seed = seed;
  return s;
}

OJson Header(const Context& ctx, const std::string& generator,
             const OJson& source, const Mode& mode) {
  OJson h;
  h["experiment"] = ctx.config.id;
  h["label"] = ctx.config.label;
  h["seed"] = ctx.config.seed;
  h["horizon"] = ctx.horizon;
  h["generator"] = generator;
  h["source"] = source;
  h["mode"] = ToJson(mode);
  return h;
}

OJson ScriptedJson(const ScriptedSpec& s) {
  OJson j = ToJson(s);
  OJson out;
  out["kind"] = "scripted";
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value();
  return out;
}

// First step index from which every verdict is Correct (horizon if none).
std::size_t MistakeFreeFrom(const Transcript& tr, std::size_t from) {
  std::size_t last_bad = from;
  for (const auto& step : tr.steps) {
    if (step.t >= from && step.verdict != Verdict::kCorrect) {
      last_bad = step.t + 1;
    }
  }
  return last_bad;
}

bool CleanFrom(const Transcript& tr, std::size_t from) {
  return MistakeFreeFrom(tr, from) == from;
}

std::string Describe(const ClosedFormLanguage& l) { return l.ToString(); }

// Whether `sub` is contained in `l`.
bool Covers(const ClosedFormLanguage& l, const ClosedFormLanguage& sub) {
  ElementSet finite;
  auto both = intersect_languages(l, sub, &finite);
  return both && *both == sub;
}

// ---- thm3.1 ----

void Thm31(const Context& ctx, Outcome* out) {
  std::vector<std::string> gens = {"max-plus-one", "follow-suffix",
                                   "omission-ci:0"};
  if (ctx.config.params.contains("generator")) {
    gens = {NameOf(ctx.config.params.at("generator"))};
  }
  for (const auto& name : gens) {
    auto g = make_generator(name);
    auto adv = staged_union_adversary();
    RunOutput r = run(*g, *adv, Mode::Standard(), ctx.horizon);
    const auto& res = r.result;
    out->Check(res.certified_mistakes >= ctx.m,
               name + ": only " + std::to_string(res.certified_mistakes) +
                   " certified mistakes");
    out->Check(res.violations.empty(), name + ": stream violations");
    for (std::size_t k = 1; k <= ctx.m; ++k) {
      out->Check(adv->sent().count(-static_cast<Element>(k)) > 0,
                 name + ": negative -" + std::to_string(k) + " not emitted");
    }
    if (name == "max-plus-one") {
      bool prefix = res.trigger_times.size() >= ctx.m;
      for (std::size_t k = 0; prefix && k < ctx.m; ++k) {
        prefix = res.trigger_times[k] == 2 * k;
      }
      out->Check(prefix, "max-plus-one: trigger times are not 0,2,4,...");
    }
    out->notes.push_back(name + " certified=" +
                         std::to_string(res.certified_mistakes));
    out->Add(name + " vs staged-union",
             Header(ctx, name, "staged-union", Mode::Standard()),
             std::move(r));
  }
  // Positive side: the suffix follower on A u P_i.
  const ClosedFormLanguage k({-3, 2}, 7, false);
  for (std::uint64_t s = 0; s < 2; ++s) {
    ScriptedSpec spec = Scripted(k, ctx.config.seed + s, s > 0);
    ScriptedSource src(spec);
    auto g = baseline(Baseline::kFollowSuffix);
    RunOutput r = run(*g, src, Mode::Standard(), ctx.horizon);
    out->Check(CleanFrom(r.transcript, 7 + 2),
               "follow-suffix errs late on " + Describe(k));
    out->Add("follow-suffix on " + Describe(k),
             Header(ctx, "follow-suffix", ScriptedJson(spec), Mode::Standard()),
             std::move(r));
  }
}

// ---- alg1-2-equiv ----

void Alg12(const Context& ctx, Outcome* out) {
  constexpr std::size_t kFrom = 20;
  const std::vector<std::size_t> positions = {0, 3, 7, 11, 19};
  // C2 side: noise is non-negative and outside the truth.
  const std::vector<ClosedFormLanguage> c2_truths = {
      ClosedFormLanguage::Negatives(),
      ClosedFormLanguage({4, 9}, std::nullopt, true),
      ClosedFormLanguage({0}, std::nullopt, true),
      ClosedFormLanguage({1, 2, 3}, std::nullopt, true),
      ClosedFormLanguage({10, 20, 30}, std::nullopt, true),
  };
  for (std::size_t k = 0; k < c2_truths.size(); ++k) {
    ScriptedSpec spec = Scripted(c2_truths[k], ctx.config.seed + k, k % 2 == 1);
    Element candidate = 0;
    for (std::size_t n = 0; n <= k; ++n) {
      while (spec.truth.Contains(candidate)) ++candidate;
      spec.noise.emplace_back(positions[n], candidate++);
    }
    ScriptedSource src(spec);
    auto g = noisy_from_sampleless(intersection_generator(collection_c2()));
    const Mode mode = Mode::Noisy(spec.noise.size());
    RunOutput r = run(*g, src, mode, ctx.horizon);
    out->Check(CleanFrom(r.transcript, kFrom),
               "alg1 over C2 errs after step 20 on " + Describe(spec.truth));
    out->Check(r.result.violations.empty(), "noisy C2 stream invalid");
    out->Add("alg1(C2) on " + Describe(spec.truth),
             Header(ctx, g->Name(), ScriptedJson(spec), mode), std::move(r));
  }
  // Chain side: K = P_m, negative noise.
  const std::vector<Element> ms = {0, 3, 7, 12, 20};
  for (std::size_t k = 0; k < ms.size(); ++k) {
    ScriptedSpec spec = Scripted(ClosedFormLanguage::Suffix(ms[k]),
                                 ctx.config.seed + 10 + k, k % 2 == 0);
    for (std::size_t n = 0; n < std::min<std::size_t>(k + 1, 5); ++n) {
      spec.noise.emplace_back(positions[n], -static_cast<Element>(n) - 1);
    }
    ScriptedSource src(spec);
    auto g = noisy_from_sampleless(chain_generator(collection_p_prefixes()));
    const Mode mode = Mode::Noisy(spec.noise.size());
    RunOutput r = run(*g, src, mode, ctx.horizon);
    out->Check(CleanFrom(r.transcript, kFrom),
               "alg1 over the prefix chain errs after step 20 on " +
                   Describe(spec.truth));
    out->Add("alg1(alg3) on " + Describe(spec.truth),
             Header(ctx, g->Name(), ScriptedJson(spec), mode), std::move(r));
  }
  // Round trip.
  constexpr std::size_t kRoundTrip = 10'000;
  auto seq = sampleless_from_noisy(
      noisy_from_sampleless(intersection_generator(collection_c2())));
  RunSpec rs;
  rs.mode = Mode::Sampleless();
  rs.horizon = kRoundTrip;
  rs.truth = ClosedFormLanguage::Negatives();
  RunOutput r = run(*seq, nullptr, rs);
  out->Check(r.result.violations.empty(), "round trip stream repeats");
  out->Check(CleanFrom(r.transcript, kFrom),
             "round trip leaves the negatives after step 20");
  OJson src;
  src["kind"] = "none";
  src["truth"] = ToJson(*rs.truth);
  out->Add("alg2(alg1(C2))", Header(ctx, seq->Name(), src, rs.mode),
           std::move(r));
}

// ---- alg3-chain ----

void Alg3(const Context& ctx, Outcome* out) {
  Element m = 7;
  if (ctx.config.params.contains("K")) {
    const Json& k = ctx.config.params.at("K");
    if (k.is_number_integer()) {
      m = k.get<Element>();
    } else {
      const ClosedFormLanguage l = LanguageFromJson(k);
      if (!l.tail_start() || !(l == ClosedFormLanguage::Suffix(*l.tail_start()))) {
        throw InvalidArgument("K must be a suffix P_m");
      }
      m = *l.tail_start();
    }
  }
  if (m < 0) throw InvalidArgument("K must be a natural suffix");
  auto seq = chain_generator(collection_p_prefixes());
  RunSpec rs;
  rs.mode = Mode::Sampleless();
  rs.horizon = ctx.horizon;
  rs.truth = ClosedFormLanguage::Suffix(m);
  RunOutput r = run(*seq, nullptr, rs);
  out->Check(r.result.observed_convergence <= static_cast<std::size_t>(m),
             "convergence " + std::to_string(r.result.observed_convergence) +
                 " exceeds " + std::to_string(m));
  out->Check(r.result.violations.empty(), "chain stream repeats");
  OJson src;
  src["kind"] = "none";
  src["truth"] = ToJson(*rs.truth);
  out->Add("alg3(P-prefixes) vs P_" + std::to_string(m),
           Header(ctx, seq->Name(), src, rs.mode), std::move(r));
}

// ---- thm4.3-check ----

void Thm43(const Context& ctx, Outcome* out) {
  std::vector<std::pair<std::string, std::optional<bool>>> table = {
      {"C1", false},     {"C2", true},           {"C^i:0", false},
      {"C^i:2", false},  {"B^i:1", false},       {"P-family", false},
      {"thm5.4", false}, {"suffix-at:5", true},
  };
  if (ctx.config.params.contains("collection")) {
    const std::string name = ctx.config.params.at("collection");
    std::optional<bool> expect;
    if (ctx.config.params.contains("expect")) {
      expect = ctx.config.params.at("expect").get<bool>();
    }
    table = {{name, expect}};
  }
  for (const auto& [name, expect] : table) {
    const bool got = uniform_without_samples_check(named_collection(name));
    out->Check(!expect || got == *expect,
               name + ": intersection infinite = " + (got ? "true" : "false"));
    out->notes.push_back(name + "=" + (got ? "infinite" : "finite"));
  }
  ++out->runs;
}

// ---- thm4.5-omissions ----

void Thm45(const Context& ctx, Outcome* out) {
  const std::vector<ClosedFormLanguage> truths = {
      ClosedFormLanguage::Negatives(),
      ClosedFormLanguage({7}, std::nullopt, true),
      ClosedFormLanguage({0, 3}, std::nullopt, true),
      ClosedFormLanguage({2, 5, 11}, std::nullopt, true),
  };
  std::size_t configs = 0;
  for (std::size_t k = 0; k < truths.size(); ++k) {
    for (int variant = 0; variant < 3; ++variant) {
      ScriptedSpec spec = Scripted(truths[k], ctx.config.seed + k, k % 2 == 1);
      Mode mode = Mode::Lossy(0);
      if (variant == 1) {
        spec.omissions = {spec.truth.At(1)};
        mode = Mode::Lossy(1);
      } else if (variant == 2) {
        spec.omission_stride = 2;
        mode = Mode::Lossy(std::nullopt);
      }
      {
        ScriptedSource src(spec);
        auto g = noisy_from_sampleless(intersection_generator(collection_c2()));
        RunOutput r = run(*g, src, mode, ctx.horizon);
        out->Check(CleanFrom(r.transcript, 0) && r.result.violations.empty(),
                   "alg1(C2) errs under " + mode.ToString() + " on " +
                       Describe(spec.truth));
        out->Add("alg1(C2) " + mode.ToString() + " " + Describe(spec.truth),
                 Header(ctx, g->Name(), ScriptedJson(spec), mode),
                 std::move(r));
        ++configs;
      }
      {
        ScriptedSource src(spec);
        auto g = feedback_union_generator({collection_c2()});
        RunSpec rs;
        rs.mode = Mode::Feedback();
        rs.horizon = ctx.horizon;
        RunOutput r = run(*g, src, rs);
        out->Check(CleanFrom(r.transcript, 0) && r.result.violations.empty(),
                   "alg4([C2]) errs under " + mode.ToString() + " on " +
                       Describe(spec.truth));
        out->Add("alg4([C2]) " + mode.ToString() + " " + Describe(spec.truth),
                 Header(ctx, g->Name(), ScriptedJson(spec), rs.mode),
                 std::move(r));
        ++configs;
      }
    }
  }
  out->notes.push_back(std::to_string(configs) + " configurations");
}

// Levels for the hierarchy experiments: params.i or the default list.
std::vector<int> Levels(const Context& ctx, std::vector<int> defaults) {
  if (ctx.config.params.contains("i")) {
    const int i = ctx.config.params.at("i").get<int>();
    if (i < 0) throw InvalidArgument("level must be non-negative");
    return {i};
  }
  return defaults;
}

// First step at which every element of `need` has been revealed.
std::size_t AllSeenAt(const Transcript& tr, const ElementSet& need) {
  ElementSet left = need;
  for (const auto& step : tr.steps) {
    if (left.empty()) return step.t;
    if (step.x) left.erase(*step.x);
    if (left.empty()) return step.t;
  }
  return tr.steps.size();
}

std::size_t AnySeenAt(const Transcript& tr, const ElementSet& need) {
  for (const auto& step : tr.steps) {
    if (step.x && need.count(*step.x) > 0) return step.t;
  }
  return tr.steps.size();
}

// ---- thm4.8-omit-i ----

void Thm48(const Context& ctx, Outcome* out) {
  for (int i : Levels(ctx, {0, 1, 2})) {
    const ElementSet low = range_set(0, i);
    const std::string tag = "i=" + std::to_string(i);
    // C_1^i: {0..i} u A u P_j; omit i of the low elements.
    const std::vector<std::pair<ElementSet, Element>> suffix_cases = {
        {{}, 4}, {{-2, 7}, 9}, {{-5}, 0}, {{3, 20}, 12}, {{-1, -3}, 6},
        {{}, 15}};
    std::size_t sources = 0;
    for (std::size_t k = 0; k < suffix_cases.size(); ++k) {
      ElementSet finite = suffix_cases[k].first;
      finite.insert(low.begin(), low.end());
      const Element j = suffix_cases[k].second;
      ScriptedSpec spec = Scripted(ClosedFormLanguage(finite, j, false),
                                   ctx.config.seed + k, k % 2 == 1);
      for (int o = 0; o < i; ++o) spec.omissions.insert(o + (k % 2));
      ScriptedSource src(spec);
      auto g = omission_generator_ci(i);
      const Mode mode = Mode::Lossy(static_cast<std::size_t>(i));
      RunOutput r = run(*g, src, mode, ctx.horizon);
      const std::size_t t_star = std::max<std::size_t>(
          static_cast<std::size_t>(j), AnySeenAt(r.transcript, low));
      out->Check(CleanFrom(r.transcript, t_star) &&
                     r.result.violations.empty(),
                 tag + ": omission-ci errs after " + std::to_string(t_star) +
                     " on " + Describe(spec.truth));
      out->Add(tag + " omission-ci on " + Describe(spec.truth),
               Header(ctx, g->Name(), ScriptedJson(spec), mode), std::move(r));
      ++sources;
    }
    // C_2^i: A u Z_{<0} with A avoiding {0..i}.
    const std::vector<ElementSet> neg_cases = {
        {}, {i + 1}, {i + 4, i + 9}, {50}, {i + 2, i + 3, i + 5}, {100, 200}};
    for (std::size_t k = 0; k < neg_cases.size(); ++k) {
      ScriptedSpec spec =
          Scripted(ClosedFormLanguage(neg_cases[k], std::nullopt, true),
                   ctx.config.seed + 20 + k, k % 2 == 0);
      for (int o = 0; o < i; ++o) spec.omissions.insert(-1 - 2 * o);
      ScriptedSource src(spec);
      auto g = omission_generator_ci(i);
      const Mode mode = Mode::Lossy(static_cast<std::size_t>(i));
      RunOutput r = run(*g, src, mode, ctx.horizon);
      out->Check(CleanFrom(r.transcript, 0) && r.result.violations.empty(),
                 tag + ": omission-ci errs on " + Describe(spec.truth));
      out->Add(tag + " omission-ci on " + Describe(spec.truth),
               Header(ctx, g->Name(), ScriptedJson(spec), mode), std::move(r));
      ++sources;
    }
    // Negative side.
    std::string gname = "omission-ci:" + std::to_string(i);
    if (ctx.config.params.contains("generator")) {
      gname = NameOf(ctx.config.params.at("generator"));
    }
    auto g = make_generator(gname);
    auto adv = omission_adversary(i);
    const Mode mode = Mode::Lossy(static_cast<std::size_t>(i) + 1);
    RunOutput r = run(*g, *adv, mode, ctx.horizon);
    const std::size_t forced =
        r.result.certified_mistakes + r.result.no_trigger_mistakes;
    out->Check(forced >= ctx.m, tag + ": adversary forced only " +
                                    std::to_string(forced) + " mistakes");
    bool clean = r.result.violations.empty();
    for (Element x : low) clean = clean && adv->sent().count(x) == 0;
    out->Check(clean, tag + ": omission adversary revealed a reserved value");
    out->notes.push_back(tag + " forced=" + std::to_string(forced) +
                         (r.result.no_trigger ? " (open stage)" : ""));
    out->Add(tag + " " + gname + " vs " + adv->Name(),
             Header(ctx, gname, adv->Name(), mode), std::move(r));
  }
}

// ---- thm5.2-noise-i ----

void Thm52(const Context& ctx, Outcome* out) {
  const std::vector<std::size_t> positions = {0, 2, 5};
  for (int i : Levels(ctx, {0, 1, 2})) {
    const ElementSet low = range_set(0, i);
    const std::string tag = "i=" + std::to_string(i);
    // C_1^i with up to i negative noise strings.
    const std::vector<std::pair<ElementSet, Element>> suffix_cases = {
        {{}, 4}, {{-2, 7}, 9}, {{-5}, 0}, {{3, 20}, 12}, {{}, 15}};
    for (std::size_t k = 0; k < suffix_cases.size(); ++k) {
      ElementSet finite = suffix_cases[k].first;
      finite.insert(low.begin(), low.end());
      const Element j = suffix_cases[k].second;
      ScriptedSpec spec = Scripted(ClosedFormLanguage(finite, j, false),
                                   ctx.config.seed + k, k % 2 == 1);
      Element noise = -1;
      for (int n = 0; n < i; ++n) {
        while (spec.truth.Contains(noise)) --noise;
        spec.noise.emplace_back(positions[n], noise--);
      }
      ScriptedSource src(spec);
      auto g = noise_level_generator_ci(i);
      const Mode mode = Mode::Noisy(static_cast<std::size_t>(i));
      RunOutput r = run(*g, src, mode, ctx.horizon);
      const std::size_t t_star = std::max<std::size_t>(
          static_cast<std::size_t>(j), AllSeenAt(r.transcript, low));
      out->Check(CleanFrom(r.transcript, t_star) &&
                     r.result.violations.empty(),
                 tag + ": noise-level-ci errs after " +
                     std::to_string(t_star) + " on " + Describe(spec.truth));
      out->Add(tag + " noise-level-ci on " + Describe(spec.truth),
               Header(ctx, g->Name(), ScriptedJson(spec), mode), std::move(r));
    }
    // C_2^i with up to i noise strings taken from {0..i}.
    const std::vector<ElementSet> neg_cases = {
        {}, {i + 1}, {i + 4, i + 9}, {50}, {i + 2, i + 3, i + 5}};
    for (std::size_t k = 0; k < neg_cases.size(); ++k) {
      ScriptedSpec spec =
          Scripted(ClosedFormLanguage(neg_cases[k], std::nullopt, true),
                   ctx.config.seed + 20 + k, k % 2 == 0);
      for (int n = 0; n < i; ++n) spec.noise.emplace_back(positions[n], n);
      ScriptedSource src(spec);
      auto g = noise_level_generator_ci(i);
      const Mode mode = Mode::Noisy(static_cast<std::size_t>(i));
      RunOutput r = run(*g, src, mode, ctx.horizon);
      out->Check(CleanFrom(r.transcript, 0) && r.result.violations.empty(),
                 tag + ": noise-level-ci errs on " + Describe(spec.truth));
      out->Add(tag + " noise-level-ci on " + Describe(spec.truth),
               Header(ctx, g->Name(), ScriptedJson(spec), mode), std::move(r));
    }
    std::string gname = "noise-level-ci:" + std::to_string(i);
    if (ctx.config.params.contains("generator")) {
      gname = NameOf(ctx.config.params.at("generator"));
    }
    auto g = make_generator(gname);
    auto adv = noise_adversary_composed(i);
    const Mode mode = Mode::Noisy(static_cast<std::size_t>(i) + 1);
    RunOutput r = run(*g, *adv, mode, ctx.horizon);
    const std::size_t forced =
        r.result.certified_mistakes + r.result.no_trigger_mistakes;
    out->Check(forced >= ctx.m, tag + ": adversary forced only " +
                                    std::to_string(forced) + " mistakes");
    out->Check(r.result.non_members_revealed ==
                   static_cast<std::size_t>(i) + 1,
               tag + ": adversary revealed " +
                   std::to_string(r.result.non_members_revealed) +
                   " non-members");
    out->Check(r.result.violations.empty(), tag + ": adversary stream invalid");
    out->notes.push_back(tag + " forced=" + std::to_string(forced));
    out->Add(tag + " " + gname + " vs " + adv->Name(),
             Header(ctx, gname, adv->Name(), mode), std::move(r));
  }
}

// ---- thm5.4-sensitivity ----

void Thm54(const Context& ctx, Outcome* out) {
  const std::vector<std::size_t> positions = {0, 1, 3, 6, 10};
  for (int i : Levels(ctx, {0, 1, 2, 3, 4})) {
    const std::string tag = "i=" + std::to_string(i);
    ElementSet need;
    for (int k = 1; k <= i + 1; ++k) need.insert(-k);
    // P_k with i negative noise strings.
    for (Element k : {0, 3, 8}) {
      ScriptedSpec spec = Scripted(ClosedFormLanguage::Suffix(k),
                                   ctx.config.seed + k, k == 3);
      for (int n = 0; n < i; ++n) spec.noise.emplace_back(positions[n], -1 - n);
      ScriptedSource src(spec);
      auto g = sensitivity_generator_gi(i);
      const Mode mode = Mode::Noisy(static_cast<std::size_t>(i));
      RunOutput r = run(*g, src, mode, ctx.horizon);
      out->Check(CleanFrom(r.transcript, static_cast<std::size_t>(k)) &&
                     r.result.violations.empty(),
                 tag + ": sensitivity-gi errs on " + Describe(spec.truth));
      out->Add(tag + " sensitivity-gi on " + Describe(spec.truth),
               Header(ctx, g->Name(), ScriptedJson(spec), mode), std::move(r));
    }
    // A u Z_{<0} with i non-negative noise strings.
    for (const ElementSet& a : {ElementSet{}, ElementSet{5}, ElementSet{2, 9}}) {
      ScriptedSpec spec = Scripted(ClosedFormLanguage(a, std::nullopt, true),
                                   ctx.config.seed + a.size(), a.size() == 1);
      Element noise = 0;
      for (int n = 0; n < i; ++n) {
        while (spec.truth.Contains(noise)) ++noise;
        spec.noise.emplace_back(positions[n], noise++);
      }
      ScriptedSource src(spec);
      auto g = sensitivity_generator_gi(i);
      const Mode mode = Mode::Noisy(static_cast<std::size_t>(i));
      RunOutput r = run(*g, src, mode, ctx.horizon);
      const std::size_t t_star = AllSeenAt(r.transcript, need);
      out->Check(CleanFrom(r.transcript, t_star) &&
                     r.result.violations.empty(),
                 tag + ": sensitivity-gi errs after " +
                     std::to_string(t_star) + " on " + Describe(spec.truth));
      out->Add(tag + " sensitivity-gi on " + Describe(spec.truth),
               Header(ctx, g->Name(), ScriptedJson(spec), mode), std::move(r));
    }
    std::string gname = "sensitivity-gi:" + std::to_string(i);
    if (ctx.config.params.contains("generator")) {
      gname = NameOf(ctx.config.params.at("generator"));
    }
    auto g = make_generator(gname);
    auto adv = sensitivity_noise_adversary();
    RunOutput r = run(*g, *adv, Mode::Standard(), ctx.horizon);
    const std::size_t forced =
        r.result.certified_mistakes + r.result.no_trigger_mistakes;
    out->Check(forced >= ctx.m, tag + ": adversary forced only " +
                                    std::to_string(forced) + " mistakes");
    const auto& stages = adv->stages();
    bool levels = stages.front().declared_noise == std::size_t{0};
    for (std::size_t s = 1; s < stages.size(); ++s) {
      levels = levels && stages[s].declared_noise ==
                             2 + *stages[s - 1].trigger;
    }
    out->Check(levels, tag + ": declared stage noise is not 2 + t_j");
    out->Check(r.result.violations.empty(), tag + ": adversary stream invalid");
    out->notes.push_back(tag + " forced=" + std::to_string(forced));
    out->Add(tag + " " + gname + " vs " + adv->Name(),
             Header(ctx, gname, adv->Name(), Mode::Standard()), std::move(r));
  }
}

// ---- alg4-feedback ----

std::vector<CollectionSpec> FeedbackParts(int last) {
  std::vector<CollectionSpec> parts = {collection_c2()};
  for (int j = 0; j <= last; ++j) parts.push_back(collection_suffix_at(j));
  return parts;
}

// Index of the first part of FeedbackParts containing K.
std::optional<std::size_t> FirstPartContaining(const ClosedFormLanguage& k,
                                               int last) {
  if (Covers(k, ClosedFormLanguage::Negatives())) return 0;
  for (int j = 0; j <= last; ++j) {
    if (Covers(k, ClosedFormLanguage::Suffix(j))) {
      return static_cast<std::size_t>(j) + 1;
    }
  }
  return std::nullopt;
}

void Alg4(const Context& ctx, Outcome* out) {
  constexpr int kLast = 9;
  const std::vector<ClosedFormLanguage> truths = {
      ClosedFormLanguage::Negatives(),
      ClosedFormLanguage({3}, std::nullopt, true),
      ClosedFormLanguage({0, 8}, std::nullopt, true),
      ClosedFormLanguage({7}, std::nullopt, true),
      ClosedFormLanguage({1, 4, 6}, std::nullopt, true),
      ClosedFormLanguage({-2}, 4, false),
      ClosedFormLanguage::Suffix(9),
      ClosedFormLanguage({1, 5}, 7, false),
      ClosedFormLanguage({-1, -5}, 0, false),
      ClosedFormLanguage({2, 3, 4}, 6, false),
  };
  for (std::size_t k = 0; k < truths.size(); ++k) {
    for (int order = 0; order < 2; ++order) {
      ScriptedSpec spec =
          Scripted(truths[k], ctx.config.seed + 31 * k + order, order == 1);
      ScriptedSource src(spec);
      auto g = feedback_union_generator(FeedbackParts(kLast));
      RunSpec rs;
      rs.mode = Mode::Feedback();
      rs.horizon = ctx.horizon;
      RunOutput r = run(*g, src, rs);
      const auto first = FirstPartContaining(spec.truth, kLast);
      out->Check(first.has_value(), "truth outside the union");
      out->Check(first && g->current_part() <= *first,
                 "alg4 moved past part " + std::to_string(first.value_or(0)) +
                     " on " + Describe(spec.truth));
      std::size_t last_switch = 0;
      bool answers = true;
      for (const auto& step : r.transcript.steps) {
        if (step.y) {
          answers = answers && step.a == spec.truth.Contains(*step.y);
          if (step.a == false) last_switch = step.t + 1;
        }
      }
      out->Check(answers, "an answer disagrees with the truth");
      out->Check(CleanFrom(r.transcript, last_switch),
                 "alg4 errs after its last switch on " + Describe(spec.truth));
      out->Add("alg4 on " + Describe(spec.truth),
               Header(ctx, g->Name(), ScriptedJson(spec), rs.mode),
               std::move(r));
    }
  }
}

// ---- alg5-queries ----

void Alg5(const Context& ctx, Outcome* out) {
  const std::vector<ClosedFormLanguage> truths = {
      ClosedFormLanguage({5}, std::nullopt, true),
      ClosedFormLanguage::Suffix(0),
      ClosedFormLanguage({-3}, 4, false),
      ClosedFormLanguage({2, 7}, std::nullopt, true),
      ClosedFormLanguage::Negatives(),
      ClosedFormLanguage({-9, -4}, 10, false),
  };
  const std::size_t settle = ctx.horizon / 2;
  bool monotone = true;
  for (std::size_t k = 0; k < truths.size(); ++k) {
    for (int order = 0; order < 2; ++order) {
      ScriptedSpec spec =
          Scripted(truths[k], ctx.config.seed + 7 * k + order, order == 1);
      ScriptedSource direct_src(spec);
      auto direct = toy_one_query();
      RunSpec rs;
      rs.mode = Mode::Feedback(1);
      rs.horizon = ctx.horizon;
      RunOutput d = run(*direct, direct_src, rs);

      ScriptedSource strip_src(spec);
      auto stripped = strip_queries(toy_one_query());
      RunOutput s = run(*stripped, strip_src, Mode::Standard(), ctx.horizon);
      monotone = monotone && stripped->monitor().PreorderMonotone();

      bool match = true;
      for (std::size_t t = settle; t < ctx.horizon; ++t) {
        match = match &&
                d.transcript.steps[t].verdict == s.transcript.steps[t].verdict;
      }
      out->Check(match && CleanFrom(s.transcript, settle),
                 "stripped verdicts differ late on " + Describe(spec.truth));
      out->Add("toy on " + Describe(spec.truth),
               Header(ctx, direct->Name(), ScriptedJson(spec), rs.mode),
               std::move(d));
      out->Add("alg5(toy) on " + Describe(spec.truth),
               Header(ctx, stripped->Name(), ScriptedJson(spec),
                      Mode::Standard()),
               std::move(s));
    }
  }
  out->Check(monotone, "decision-tree preorder index decreased");
}

// ---- alg6-identify ----

void Alg6(const Context& ctx, Outcome* out) {
  const std::vector<Element> tails = {0, 5, 9};
  std::vector<ClosedFormLanguage> ls;
  for (Element j : tails) ls.push_back(ClosedFormLanguage::Suffix(j));
  const CollectionSpec c = ExplicitCountable::FromList(ls, "P0-P5-P9");
  for (std::size_t k = 0; k < ls.size(); ++k) {
    ScriptedSpec spec = Scripted(ls[k]);
    ScriptedSource src(spec);
    auto g = identifier(c);
    RunSpec rs;
    rs.mode = Mode::Identification();
    rs.horizon = ctx.horizon;
    rs.collection = c;
    RunOutput r = run(*g, src, rs);
    // Refutation time of each earlier index.
    std::size_t bound = k;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t refuted = r.transcript.steps.size();
      for (const auto& step : r.transcript.steps) {
        const bool by_sample = !ls[i].Contains(*step.x);
        const bool by_query = step.y && ls[i].Contains(*step.y) != *step.a;
        if (by_sample || by_query) {
          refuted = step.t;
          break;
        }
      }
      bound = std::max(bound, refuted);
    }
    bool stable = true;
    for (const auto& step : r.transcript.steps) {
      if (step.t >= bound) stable = stable && step.z == static_cast<Element>(k);
    }
    out->Check(stable, "identifier unstable after " + std::to_string(bound) +
                           " on " + Describe(ls[k]));
    out->notes.push_back("K=" + Describe(ls[k]) + " bound=" +
                         std::to_string(bound));
    out->Add("alg6 on " + Describe(ls[k]),
             Header(ctx, g->Name(), ScriptedJson(spec), rs.mode),
             std::move(r));
  }
}

// ---- appendixA-repetition ----

void AppendixA(const Context& ctx, Outcome* out) {
  const std::vector<std::pair<std::string, ClosedFormLanguage>> cases = {
      {"follow-suffix", ClosedFormLanguage({-4, 1}, 6, false)},
      {"alg1:C2", ClosedFormLanguage({2, 9}, std::nullopt, true)},
  };
  constexpr std::uint64_t kSeeds = 10;
  for (const auto& [name, truth] : cases) {
    for (std::uint64_t s = 0; s < kSeeds; ++s) {
      ScriptedSpec plain = Scripted(truth, ctx.config.seed + s, true);
      ScriptedSource plain_src(plain);
      auto g = make_generator(name);
      RunOutput base = run(*g, plain_src, Mode::Standard(), ctx.horizon);
      const std::size_t c = base.result.observed_convergence;

      ScriptedSpec rep = plain;
      rep.repetitions = true;
      ScriptedSource rep_src(rep);
      auto w = dedup_wrapper(make_generator(name));
      RunOutput r = run(*w, rep_src, Mode::Repetition(), ctx.horizon);
      ElementSet distinct;
      std::size_t from = r.transcript.steps.size();
      for (const auto& step : r.transcript.steps) {
        distinct.insert(*step.x);
        if (distinct.size() >= c + 1) {
          from = step.t;
          break;
        }
      }
      out->Check(CleanFrom(r.transcript, from) && r.result.violations.empty(),
                 name + " seed " + std::to_string(s) +
                     ": wrapped generator errs after step " +
                     std::to_string(from));
      out->Add(name + " seed " + std::to_string(s),
               Header(ctx, name, ScriptedJson(plain), Mode::Standard()),
               std::move(base));
      out->Add("alg7(" + name + ") seed " + std::to_string(s),
               Header(ctx, w->Name(), ScriptedJson(rep), Mode::Repetition()),
               std::move(r));
    }
  }
}

struct Entry {
  ExperimentInfo info;
  std::function<void(const Context&, Outcome*)> body;
};

const std::vector<Entry>& Registry() {
  static const std::vector<Entry> entries = {
      {{"alg1-2-equiv",
        "Noisy generation from a sampleless stream, and back: the converted "
        "generator is clean from step 20 on noisy sources for the negatives "
        "family and the prefix chain; the round trip stays injective.",
        1000},
       Alg12},
      {{"alg3-chain",
        "Chain generator on C_t = {P_0..P_t}; K = P_m converges by step m.",
        500},
       Alg3},
      {{"alg4-feedback",
        "Feedback generator for [C2, A u P_0, ..., A u P_9]: no mistakes "
        "after the last part switch, never past the first part holding K.",
        1000},
       Alg4},
      {{"alg5-queries",
        "Query stripping of a one-query generator: late verdicts match the "
        "queried original and the decision-tree preorder never decreases.",
        1000},
       Alg5},
      {{"alg6-identify",
        "Identifier with feedback on [P_0, P_5, P_9]: the output index is "
        "fixed from max(k, refutation times of earlier indices).",
        1000},
       Alg6},
      {{"appendixA-repetition",
        "Deduplicating wrapper under seeded repetition schedules is correct "
        "once the distinct prefix reaches the plain convergence length.",
        1000},
       AppendixA},
      {{"thm3.1",
        "Staged adversary against the union of C1 and C2 forces M certified "
        "mistakes; the suffix follower still generates on A u P_i alone.",
        10000},
       Thm31},
      {{"thm4.3-check",
        "Sampleless uniform generation holds exactly when the intersection "
        "of the collection is infinite; checked on the registered families.",
        1000},
       Thm43},
      {{"thm4.5-omissions",
        "Generators for C2 stay clean when the enumeration drops one or "
        "infinitely many strings.",
        1000},
       Thm45},
      {{"thm4.8-omit-i",
        "Level-i omission generator for C^i handles i omissions; the "
        "omission adversary defeats it with i+1.",
        1000},
       Thm48},
      {{"thm5.2-noise-i",
        "Level-i noise generator for C^i handles i noisy strings; prefixing "
        "i+1 noisy strings to the staged adversary defeats it.",
        1000},
       Thm52},
      {{"thm5.4-sensitivity",
        "Every fixed-level generator for {P_i} u C2 is defeated by an "
        "adversary whose stage noise level is 2 + t_j.",
        1000},
       Thm54},
  };
  return entries;
}

const Entry* FindEntry(const std::string& id) {
  for (const auto& e : Registry()) {
    if (e.info.id == id) return &e;
  }
  return nullptr;
}

std::string Join(const std::vector<std::string>& parts,
                 const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    out += (k ? sep : "") + parts[k];
  }
  return out;
}

ExperimentConfig ConfigFromJson(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("config record must be an object");
  ExperimentConfig c;
  c.id = j.at("id").get<std::string>();
  if (!FindEntry(c.id)) throw InvalidArgument("unknown experiment '" + c.id + "'");
  if (j.contains("horizon")) {
    const auto h = j.at("horizon").get<std::int64_t>();
    if (h < 1) throw InvalidArgument("horizon must be at least 1");
    c.horizon = static_cast<std::size_t>(h);
  }
  c.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("M")) {
    const auto m = j.at("M").get<std::int64_t>();
    if (m < 0) throw InvalidArgument("M must be non-negative");
    c.min_mistakes = static_cast<std::size_t>(m);
  }
  if (j.contains("params")) {
    if (!j.at("params").is_object()) {
      throw InvalidArgument("params must be an object");
    }
    c.params = j.at("params");
  }
  // Anything else at the top level is a parameter too.
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const std::set<std::string> kReserved = {
        "id", "horizon", "seed", "M", "params", "matrix", "label"};
    if (!kReserved.count(it.key())) c.params[it.key()] = it.value();
  }
  c.label = c.id;
  return c;
}

}  // namespace

const std::vector<ExperimentInfo>& registered_experiments() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> v;
    for (const auto& e : Registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

const ExperimentInfo* find_experiment(const std::string& id) {
  const Entry* e = FindEntry(id);
  return e ? &e->info : nullptr;
}

SummaryRow run_experiment(const ExperimentConfig& config) {
  SummaryRow row;
  row.id = config.id;
  row.label = config.label.empty() ? config.id : config.label;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Entry* entry = FindEntry(config.id);
    if (!entry) throw InvalidArgument("unknown experiment '" + config.id + "'");
    Context ctx{config, config.horizon.value_or(entry->info.default_horizon),
                config.min_mistakes};
    Outcome out;
    entry->body(ctx, &out);
    row.pass = out.pass;
    row.status = out.pass ? kExitPass : kExitAssertion;
    row.runs = out.runs;
    row.mistakes = out.mistakes;
    row.convergence = out.convergence;
    row.detail = out.pass ? Join(out.notes, "; ") : Join(out.failures, "; ");
    row.traces = std::move(out.traces);
  } catch (const InvalidArgument& e) {
    row.status = kExitInvalidConfig;
    row.detail = std::string("invalid config: ") + e.what();
  } catch (const ModeMismatch& e) {
    row.status = kExitInvalidConfig;
    row.detail = std::string("mode mismatch: ") + e.what();
  } catch (const Json::exception& e) {
    row.status = kExitInvalidConfig;
    row.detail = std::string("invalid config: ") + e.what();
  } catch (const std::exception& e) {
    row.status = kExitInternal;
    row.detail = std::string("internal error: ") + e.what();
  }
  const auto stop = std::chrono::steady_clock::now();
  row.runtime_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();
  return row;
}

std::vector<SummaryRow> run_experiments(
    const std::vector<ExperimentConfig>& configs) {
  std::vector<std::future<SummaryRow>> futures;
  futures.reserve(configs.size());
  for (const auto& c : configs) {
    futures.push_back(std::async(std::launch::async, run_experiment, c));
  }
  std::vector<SummaryRow> rows;
  for (auto& f : futures) rows.push_back(f.get());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SummaryRow& a, const SummaryRow& b) {
                     return std::tie(a.id, a.label) < std::tie(b.id, b.label);
                   });
  return rows;
}

std::vector<ExperimentConfig> expand_configs(const Json& j) {
  std::vector<ExperimentConfig> out;
  if (j.is_array()) {
    for (const auto& item : j) {
      auto part = expand_configs(item);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  try {
    ExperimentConfig base = ConfigFromJson(j);
    if (!j.contains("matrix")) return {base};
    const Json& matrix = j.at("matrix");
    if (!matrix.is_object() || matrix.empty()) {
      throw InvalidArgument("matrix must be a non-empty object of lists");
    }
    std::vector<ExperimentConfig> acc = {base};
    for (auto it = matrix.begin(); it != matrix.end(); ++it) {
      if (!it.value().is_array() || it.value().empty()) {
        throw InvalidArgument("matrix entry '" + it.key() +
                              "' must be a non-empty list");
      }
      std::vector<ExperimentConfig> next;
      for (const auto& c : acc) {
        for (const auto& v : it.value()) {
          ExperimentConfig e = c;
          e.params[it.key()] = v;
          const std::string coord = it.key() + "=" + (v.is_string()
                                                          ? v.get<std::string>()
                                                          : v.dump());
          e.label = e.label == e.id ? e.id + "[" + coord + "]"
                                    : e.label.substr(0, e.label.size() - 1) +
                                          "," + coord + "]";
          next.push_back(std::move(e));
        }
      }
      acc = std::move(next);
    }
    return acc;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("bad config record: ") + e.what());
  }
}

std::vector<ExperimentConfig> default_configs(const std::string& id) {
  std::vector<ExperimentConfig> out;
  for (const auto& info : registered_experiments()) {
    if (id == "all" || id == info.id) {
      ExperimentConfig c;
      c.id = info.id;
      c.label = info.id;
      out.push_back(std::move(c));
    }
  }
  if (out.empty()) throw InvalidArgument("unknown experiment '" + id + "'");
  return out;
}

std::unique_ptr<Generator> make_generator(const Json& spec) {
  const std::string name = NameOf(spec);
  if (name == "max-plus-one") return baseline(Baseline::kMaxPlusOne);
  if (name == "min-minus-one") return baseline(Baseline::kMinMinusOne);
  if (name == "follow-suffix") return baseline(Baseline::kFollowSuffix);
  if (auto i = ParseLevel(name, "omission-ci:")) {
    return omission_generator_ci(*i);
  }
  if (auto i = ParseLevel(name, "noise-level-ci:")) {
    return noise_level_generator_ci(*i);
  }
  if (auto i = ParseLevel(name, "sensitivity-gi:")) {
    return sensitivity_generator_gi(*i);
  }
  if (name.rfind("alg1:", 0) == 0) {
    return noisy_from_sampleless(
        intersection_generator(named_collection(name.substr(5))));
  }
  if (name == "alg5:toy-one-query") return strip_queries(toy_one_query());
  if (name.rfind("alg7:", 0) == 0) {
    return dedup_wrapper(make_generator(name.substr(5)));
  }
  throw InvalidArgument("unknown generator '" + name + "'");
}

std::unique_ptr<Source> make_source(const Json& spec) {
  if (spec.is_object() && spec.value("kind", "") == "scripted") {
    return std::make_unique<ScriptedSource>(ScriptedSpecFromJson(spec));
  }
  const std::string name = NameOf(spec);
  if (name == "staged-union") return staged_union_adversary();
  if (name == "sensitivity-noise") return sensitivity_noise_adversary();
  if (auto i = ParseLevel(name, "omission:")) return omission_adversary(*i);
  if (auto i = ParseLevel(name, "noise-composed:")) {
    return noise_adversary_composed(*i);
  }
  throw InvalidArgument("unknown source '" + name + "'");
}

std::string summary_table(const std::vector<SummaryRow>& rows) {
  std::size_t w = std::string("experiment").size();
  for (const auto& r : rows) w = std::max(w, r.label.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(w)) << "experiment"
      << "  result  runs  mistakes  converge  runtime_ms  detail\n";
  for (const auto& r : rows) {
    const char* result = r.status == kExitPass        ? "PASS"
                         : r.status == kExitAssertion ? "FAIL"
                                                      : "ERROR";
    out << std::left << std::setw(static_cast<int>(w)) << r.label << "  "
        << std::setw(6) << result << "  " << std::right << std::setw(4)
        << r.runs << "  " << std::setw(8) << r.mistakes << "  "
        << std::setw(8) << r.convergence << "  " << std::setw(10)
        << std::fixed << std::setprecision(1) << r.runtime_ms << "  "
        << r.detail << "\n";
  }
  return out.str();
}

OJson summary_json(const std::vector<SummaryRow>& rows) {
  OJson list = OJson::array();
  for (const auto& r : rows) {
    OJson j;
    j["id"] = r.id;
    j["label"] = r.label;
    j["pass"] = r.pass;
    j["status"] = r.status;
    j["runs"] = r.runs;
    j["mistakes"] = r.mistakes;
    j["convergence"] = r.convergence;
    j["runtime_ms"] = r.runtime_ms;
    j["detail"] = r.detail;
    list.push_back(std::move(j));
  }
  return list;
}

void emit_summary(const std::vector<SummaryRow>& rows, std::ostream& table,
                  const std::optional<std::string>& summary_path) {
  if (rows.empty()) throw InvalidArgument("no experiments selected");
  table << summary_table(rows);
  if (summary_path) {
    std::ofstream f(*summary_path);
    if (!f) throw InvalidArgument("cannot write " + *summary_path);
    f << summary_json(rows).dump(2) << "\n";
  }
}

int exit_status(const std::vector<SummaryRow>& rows) {
  int worst = kExitPass;
  for (const auto& r : rows) worst = std::max(worst, r.status);
  return worst;
}

void write_traces(const std::vector<SummaryRow>& rows, std::ostream& out) {
  for (const auto& r : rows) {
    for (const auto& tr : r.traces) write_trace(out, tr.header, tr.output);
  }
}

}  // namespace langlimit
