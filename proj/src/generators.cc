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

#include "langlimit/generators.h"

#include <algorithm>
#include <limits>

#include "langlimit/errors.h"

namespace langlimit {
namespace {

// Running pools for the max/min formulas: S_t together with past outputs.
class Pools {
 public:
  void Reset() { *this = Pools(); }

  // Returns true if x was new.
  bool Reveal(Element x) {
    if (!seen_.insert(x).second) return false;
    Absorb(x);
    return true;
  }
  void Emit(Element z) { Absorb(z); }

  Element MaxPlusOne(std::int64_t t) const {
    return std::max<Element>(t, max_) + 1;
  }
  Element MinMinusOne() const { return std::min<Element>(0, min_) - 1; }
  Element MaxNaturalPlusOne(std::int64_t t) const {
    return std::max<Element>(t, max_nat_) + 1;
  }
  const ElementSet& seen() const { return seen_; }

 private:
  void Absorb(Element v) {
    max_ = std::max(max_, v);
    min_ = std::min(min_, v);
    if (v >= 0) max_nat_ = std::max(max_nat_, v);
  }

  ElementSet seen_;
  Element max_ = std::numeric_limits<Element>::min();
  Element min_ = std::numeric_limits<Element>::max();
  Element max_nat_ = std::numeric_limits<Element>::min();
};

enum class Rule {
  kMaxPlusOne,
  kMinMinusOne,
  kFollowSuffix,
  kOmission,     // max iff {0..i} meets S
  kNoiseLevel,   // max iff {0..i} inside S
  kSensitivity,  // min iff {-1..-(i+1)} inside S
};

class BranchGenerator : public Generator {
 public:
  BranchGenerator(Rule rule, int level, std::string name)
      : rule_(rule), level_(level), name_(std::move(name)) {
    if (level < 0) throw InvalidArgument("level must be non-negative");
  }

  void Reset() override {
    pools_.Reset();
    t_ = 0;
    hits_ = 0;
  }

  Element Step(Element x) override {
    if (pools_.Reveal(x) && InWatchedRange(x)) ++hits_;
    Element z = 0;
    switch (rule_) {
      case Rule::kMaxPlusOne:
        z = pools_.MaxPlusOne(t_);
        break;
      case Rule::kMinMinusOne:
        z = pools_.MinMinusOne();
        break;
      case Rule::kFollowSuffix:
        z = pools_.MaxNaturalPlusOne(t_);
        break;
      case Rule::kOmission:
        z = hits_ > 0 ? pools_.MaxPlusOne(t_) : pools_.MinMinusOne();
        break;
      case Rule::kNoiseLevel:
        z = hits_ == level_ + 1 ? pools_.MaxPlusOne(t_) : pools_.MinMinusOne();
        break;
      case Rule::kSensitivity:
        z = hits_ == level_ + 1 ? pools_.MinMinusOne() : pools_.MaxPlusOne(t_);
        break;
    }
    pools_.Emit(z);
    ++t_;
    return z;
  }

  std::string Name() const override { return name_; }

 private:
  bool InWatchedRange(Element x) const {
    switch (rule_) {
      case Rule::kOmission:
      case Rule::kNoiseLevel:
        return x >= 0 && x <= level_;
      case Rule::kSensitivity:
        return x <= -1 && x >= -(level_ + 1);
      default:
        return false;
    }
  }

  Rule rule_;
  int level_;
  std::string name_;
  Pools pools_;
  std::int64_t t_ = 0;
  int hits_ = 0;
};

class IntersectionStream : public SamplelessSeq {
 public:
  explicit IntersectionStream(const CollectionSpec& c) {
    ClosureResult r = intersection_stream(c);
    if (!r.is_infinite()) {
      throw InvalidArgument("intersection of " + c.ToString() +
                            " is finite: " + r.ToString());
    }
    language_ = *r.language;
  }
  void Reset() override { k_ = 0; }
  Element Next() override { return language_->At(k_++); }
  std::string Name() const override { return "intersection"; }

 private:
  std::optional<ClosedFormLanguage> language_;
  std::size_t k_ = 0;
};

class ChainGenerator : public SamplelessSeq {
 public:
  ChainGenerator(CollectionSpec chain, std::size_t cap)
      : chain_(std::move(chain)), cap_(cap) {
    if (!std::holds_alternative<ChainSpec>(chain_.variant())) {
      throw InvalidArgument(chain_.ToString() + " is not a chain");
    }
  }
  void Reset() override {
    t_ = 0;
    rank_ = 0;
    emitted_.clear();
  }
  Element Next() override {
    const ClosureResult b = intersection_stream(chain_at(chain_, t_));
    for (std::size_t probe = 0; probe < cap_; ++probe, ++rank_) {
      const Element j = zigzag_encode(rank_);
      if (b.Contains(j) && emitted_.count(j) == 0) {
        emitted_.insert(j);
        ++rank_;
        ++t_;
        return j;
      }
    }
    throw SearchExhausted("chain generator found no candidate at step " +
                          std::to_string(t_));
  }
  std::string Name() const override { return "alg3"; }

 private:
  CollectionSpec chain_;
  std::size_t cap_;
  std::size_t t_ = 0;
  std::int64_t rank_ = 0;
  ElementSet emitted_;
};

class ListStream : public SamplelessSeq {
 public:
  explicit ListStream(std::vector<Element> v) : values_(std::move(v)) {}
  void Reset() override { k_ = 0; }
  Element Next() override {
    if (k_ >= values_.size()) throw SearchExhausted("list stream ran out");
    return values_[k_++];
  }
  std::string Name() const override { return "list"; }

 private:
  std::vector<Element> values_;
  std::size_t k_ = 0;
};

class NoisyFromSampleless : public Generator {
 public:
  explicit NoisyFromSampleless(std::unique_ptr<SamplelessSeq> z)
      : z_(std::move(z)) {}
  void Reset() override {
    z_->Reset();
    buffer_.clear();
    seen_.clear();
    i_ = 0;
  }
  Element Step(Element x) override {
    seen_.insert(x);
    while (seen_.count(At(i_)) > 0) ++i_;
    return At(i_++);
  }
  std::string Name() const override { return "alg1(" + z_->Name() + ")"; }

 private:
  Element At(std::size_t j) {
    while (buffer_.size() <= j) buffer_.push_back(z_->Next());
    return buffer_[j];
  }

  std::unique_ptr<SamplelessSeq> z_;
  std::vector<Element> buffer_;
  ElementSet seen_;
  std::size_t i_ = 0;
};

class SamplelessFromNoisy : public SamplelessSeq {
 public:
  SamplelessFromNoisy(std::unique_ptr<Generator> g, FeedOrder order,
                      std::size_t cap)
      : g_(std::move(g)), order_(order), cap_(cap) {}
  void Reset() override {
    g_->Reset();
    buffer_.clear();
    emitted_.clear();
    i_ = 0;
  }
  Element Next() override {
    for (std::size_t probe = 0; probe < cap_; ++probe, ++i_) {
      const Element z = At(i_);
      if (emitted_.insert(z).second) {
        ++i_;
        return z;
      }
    }
    throw SearchExhausted("no fresh output among " + std::to_string(cap_) +
                          " probes of " + g_->Name());
  }
  std::string Name() const override { return "alg2(" + g_->Name() + ")"; }

 private:
  // z_j = G(feed_0, ..., feed_j).
  Element At(std::size_t j) {
    while (buffer_.size() <= j) {
      const auto t = static_cast<std::int64_t>(buffer_.size());
      buffer_.push_back(
          g_->Step(order_ == FeedOrder::kNaturals ? t : zigzag_encode(t)));
    }
    return buffer_[j];
  }

  std::unique_ptr<Generator> g_;
  FeedOrder order_;
  std::size_t cap_;
  std::vector<Element> buffer_;
  ElementSet emitted_;
  std::size_t i_ = 0;
};

class DedupWrapper : public Generator {
 public:
  explicit DedupWrapper(std::unique_ptr<Generator> g) : g_(std::move(g)) {}
  void Reset() override {
    g_->Reset();
    seen_.clear();
    last_.reset();
  }
  Element Step(Element x) override {
    if (seen_.insert(x).second || !last_) last_ = g_->Step(x);
    return *last_;
  }
  std::string Name() const override { return "alg7(" + g_->Name() + ")"; }

 private:
  std::unique_ptr<Generator> g_;
  ElementSet seen_;
  std::optional<Element> last_;
};

class PrefixReduced : public Generator {
 public:
  PrefixReduced(std::unique_ptr<Generator> g, std::vector<Element> prefix)
      : g_(std::move(g)), prefix_(std::move(prefix)) {
    Reset();
  }
  void Reset() override {
    g_->Reset();
    for (Element y : prefix_) g_->Step(y);
  }
  Element Step(Element x) override { return g_->Step(x); }
  std::string Name() const override {
    return "reduce(" + g_->Name() + ", " + std::to_string(prefix_.size()) +
           ")";
  }

 private:
  std::unique_ptr<Generator> g_;
  std::vector<Element> prefix_;
};

class Identifier : public FeedbackGenerator {
 public:
  Identifier(const CollectionSpec& c, QueryOrder order) : order_(order) {
    const auto* e = std::get_if<ExplicitCountable>(&c.variant());
    if (!e) {
      throw ModeMismatch("identification needs an explicitly indexed "
                         "collection, got " + c.ToString());
    }
    collection_ = *e;
  }
  void Reset() override {
    languages_.clear();
    violated_.clear();
    positive_.clear();
    negative_.clear();
    t_ = 0;
    query_ = 0;
  }
  std::optional<Element> Query(Element x) override {
    AddPositive(x);
    query_ = order_ == QueryOrder::kNaturals ? t_ : zigzag_encode(t_);
    return query_;
  }
  Element Output(std::optional<bool> answer) override {
    if (answer.value_or(false)) {
      AddPositive(query_);
    } else {
      AddNegative(query_);
    }
    std::size_t limit = static_cast<std::size_t>(t_);
    if (collection_.size) limit = std::min(limit, *collection_.size - 1);
    while (languages_.size() <= limit) AddIndex();
    ++t_;
    for (std::size_t i = 0; i <= limit; ++i) {
      if (!violated_[i]) return static_cast<Element>(i);
    }
    return 0;
  }
  std::string Name() const override { return "alg6"; }

 private:
  void AddPositive(Element x) {
    if (!positive_.insert(x).second) return;
    for (std::size_t i = 0; i < languages_.size(); ++i) {
      if (!languages_[i].Contains(x)) violated_[i] = true;
    }
  }
  void AddNegative(Element x) {
    if (!negative_.insert(x).second) return;
    for (std::size_t i = 0; i < languages_.size(); ++i) {
      if (languages_[i].Contains(x)) violated_[i] = true;
    }
  }
  void AddIndex() {
    ClosedFormLanguage l = collection_.rule(languages_.size());
    bool bad = false;
    for (Element x : positive_) bad = bad || !l.Contains(x);
    for (Element x : negative_) bad = bad || l.Contains(x);
    languages_.push_back(std::move(l));
    violated_.push_back(bad);
  }

  ExplicitCountable collection_;
  QueryOrder order_;
  std::vector<ClosedFormLanguage> languages_;
  std::vector<bool> violated_;
  ElementSet positive_;
  ElementSet negative_;
  std::int64_t t_ = 0;
  Element query_ = 0;
};

class ToyOneQuery : public FeedbackGenerator {
 public:
  void Reset() override {
    pools_.Reset();
    t_ = 0;
    yes_ = false;
  }
  std::optional<Element> Query(Element x) override {
    pools_.Reveal(x);
    if (t_ == 0) return Element{-1};
    return std::nullopt;
  }
  Element Output(std::optional<bool> answer) override {
    if (t_ == 0) yes_ = answer.value_or(false);
    const Element z = yes_ ? pools_.MinMinusOne() : pools_.MaxPlusOne(t_);
    pools_.Emit(z);
    ++t_;
    return z;
  }
  std::optional<int> QueryBudget() const override { return 1; }
  std::string Name() const override { return "toy-one-query"; }

 private:
  Pools pools_;
  std::int64_t t_ = 0;
  bool yes_ = false;
};

}  // namespace

std::unique_ptr<Generator> baseline(Baseline which) {
  switch (which) {
    case Baseline::kMaxPlusOne:
      return std::make_unique<BranchGenerator>(Rule::kMaxPlusOne, 0,
                                               "max-plus-one");
    case Baseline::kMinMinusOne:
      return std::make_unique<BranchGenerator>(Rule::kMinMinusOne, 0,
                                               "min-minus-one");
    case Baseline::kFollowSuffix:
      return std::make_unique<BranchGenerator>(Rule::kFollowSuffix, 0,
                                               "follow-suffix");
  }
  throw InvalidArgument("unknown baseline");
}

std::unique_ptr<Generator> omission_generator_ci(int i) {
  return std::make_unique<BranchGenerator>(
      Rule::kOmission, i, "omission-ci:" + std::to_string(i));
}

std::unique_ptr<Generator> noise_level_generator_ci(int i) {
  return std::make_unique<BranchGenerator>(
      Rule::kNoiseLevel, i, "noise-level-ci:" + std::to_string(i));
}

std::unique_ptr<Generator> sensitivity_generator_gi(int i) {
  return std::make_unique<BranchGenerator>(
      Rule::kSensitivity, i, "sensitivity-gi:" + std::to_string(i));
}

std::unique_ptr<SamplelessSeq> intersection_generator(const CollectionSpec& c) {
  return std::make_unique<IntersectionStream>(c);
}

std::unique_ptr<SamplelessSeq> chain_generator(const CollectionSpec& chain,
                                               std::size_t probe_cap) {
  return std::make_unique<ChainGenerator>(chain, probe_cap);
}

std::unique_ptr<SamplelessSeq> list_stream(std::vector<Element> values) {
  return std::make_unique<ListStream>(std::move(values));
}

std::unique_ptr<Generator> noisy_from_sampleless(
    std::unique_ptr<SamplelessSeq> z) {
  return std::make_unique<NoisyFromSampleless>(std::move(z));
}

std::unique_ptr<SamplelessSeq> sampleless_from_noisy(
    std::unique_ptr<Generator> g, FeedOrder order, std::size_t probe_cap) {
  return std::make_unique<SamplelessFromNoisy>(std::move(g), order, probe_cap);
}

std::unique_ptr<Generator> dedup_wrapper(std::unique_ptr<Generator> g) {
  return std::make_unique<DedupWrapper>(std::move(g));
}

std::unique_ptr<Generator> reduce_by_prefix(std::unique_ptr<Generator> g,
                                            std::vector<Element> removed) {
  return std::make_unique<PrefixReduced>(std::move(g), std::move(removed));
}

FeedbackUnionGenerator::FeedbackUnionGenerator(
    std::vector<CollectionSpec> parts, std::size_t probe_cap)
    : parts_(std::move(parts)), probe_cap_(probe_cap) {
  if (parts_.empty()) throw InvalidArgument("no parts given");
  for (const auto& p : parts_) closure_dimension(p);  // rejects Unbounded
}

void FeedbackUnionGenerator::Reset() {
  part_ = 0;
  phase_ = Phase::kEnterPart;
  dim_ = -1;
  b_ = ClosureResult::NoConsistent();
  seen_.clear();
  v_ = 0;
}

// Runs the part loop until the next step is either a gathering step or a
// streaming step.
void FeedbackUnionGenerator::Settle() {
  while (true) {
    if (phase_ == Phase::kEnterPart) {
      if (part_ >= parts_.size()) {
        throw SearchExhausted("every part was abandoned");
      }
      dim_ = closure_dimension(parts_[part_]);
      phase_ = Phase::kGatherCheck;
    }
    if (phase_ == Phase::kGather || phase_ == Phase::kGatherCheck) {
      if (dim_ >= 0 && seen_.size() <= static_cast<std::size_t>(dim_)) {
        phase_ = Phase::kGather;
        return;
      }
      if (consistent(parts_[part_], seen_)) {
        b_ = closure(parts_[part_], seen_);
        phase_ = Phase::kStream;
        return;
      }
      ++part_;
      phase_ = Phase::kEnterPart;
      continue;
    }
    return;  // kStream
  }
}

std::optional<Element> FeedbackUnionGenerator::Query(Element x) {
  Settle();
  seen_.insert(x);
  if (phase_ == Phase::kStream) {
    std::int64_t rank = zigzag_decode(v_);
    for (std::size_t probe = 0;; ++probe, ++rank) {
      if (probe >= probe_cap_) {
        throw SearchExhausted("no candidate in part " +
                              std::to_string(part_));
      }
      const Element j = zigzag_encode(rank);
      if (b_.Contains(j) && seen_.count(j) == 0) {
        v_ = j;
        break;
      }
    }
  }
  return v_;
}

Element FeedbackUnionGenerator::Output(std::optional<bool> answer) {
  const Element z = v_;
  if (phase_ == Phase::kStream && answer.has_value() && !*answer) {
    ++part_;
    phase_ = Phase::kEnterPart;
  }
  return z;
}

std::unique_ptr<FeedbackUnionGenerator> feedback_union_generator(
    std::vector<CollectionSpec> parts, std::size_t probe_cap) {
  return std::make_unique<FeedbackUnionGenerator>(std::move(parts), probe_cap);
}

std::unique_ptr<FeedbackGenerator> identifier(const CollectionSpec& c,
                                              QueryOrder order) {
  return std::make_unique<Identifier>(c, order);
}

std::unique_ptr<FeedbackGenerator> toy_one_query() {
  return std::make_unique<ToyOneQuery>();
}

std::uint64_t preorder_index(const std::vector<bool>& responses, int depth) {
  if (static_cast<int>(responses.size()) > depth) {
    throw BudgetViolation("path longer than the tree depth");
  }
  std::uint64_t index = 0;
  for (std::size_t k = 1; k <= responses.size(); ++k) {
    // Right child skips the whole left subtree.
    index += responses[k - 1] ? (std::uint64_t{1} << (depth - k + 1)) : 1;
  }
  return index;
}

bool DecisionTreeMonitor::PreorderMonotone() const {
  for (std::size_t k = 1; k < records_.size(); ++k) {
    if (records_[k].preorder < records_[k - 1].preorder) return false;
  }
  return true;
}

StripQueries::StripQueries(std::unique_ptr<FeedbackGenerator> g)
    : g_(std::move(g)) {
  const auto budget = g_->QueryBudget();
  if (!budget || *budget < 0) {
    throw InvalidArgument("strip_queries needs a finite query budget");
  }
  budget_ = *budget;
}

void StripQueries::Reset() {
  g_->Reset();
  xs_.clear();
  seen_.clear();
  monitor_.Clear();
}

Element StripQueries::Step(Element x) {
  xs_.push_back(x);
  seen_.insert(x);
  g_->Reset();
  DecisionTreeRecord rec;
  rec.t = xs_.size() - 1;
  Element z = 0;
  for (std::size_t j = 0; j < xs_.size(); ++j) {
    const std::optional<Element> y = g_->Query(xs_[j]);
    std::optional<bool> a;
    if (y) {
      if (static_cast<int>(rec.queries.size()) >= budget_) {
        throw BudgetViolation(g_->Name() + " asked more than " +
                              std::to_string(budget_) + " queries");
      }
      a = seen_.count(*y) > 0;
      rec.query_times.push_back(j);
      rec.queries.push_back(*y);
      rec.responses.push_back(*a);
    }
    z = g_->Output(a);
  }
  rec.preorder = preorder_index(rec.responses, budget_);
  monitor_.Record(std::move(rec));
  return z;
}

std::string StripQueries::Name() const { return "alg5(" + g_->Name() + ")"; }

std::unique_ptr<StripQueries> strip_queries(
    std::unique_ptr<FeedbackGenerator> g) {
  return std::make_unique<StripQueries>(std::move(g));
}

}  // namespace langlimit
