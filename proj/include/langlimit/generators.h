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

#ifndef LANGLIMIT_GENERATORS_H_
#define LANGLIMIT_GENERATORS_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "langlimit/collections.h"
#include "langlimit/language.h"

namespace langlimit {

// Default probe cap for every "least j >= i" search.
inline constexpr std::size_t kDefaultProbeCap = 1'000'000;

// Prefix function x_0..x_t -> z_t, evaluated incrementally.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual void Reset() = 0;
  virtual Element Step(Element x) = 0;
  virtual std::string Name() const = 0;
};

// Injective stream t -> z_t.
class SamplelessSeq {
 public:
  virtual ~SamplelessSeq() = default;
  virtual void Reset() = 0;
  virtual Element Next() = 0;
  virtual std::string Name() const = 0;
};

// Per step: Query(x_t) -> y_t or nothing, then Output(a_t) -> z_t.
class FeedbackGenerator {
 public:
  virtual ~FeedbackGenerator() = default;
  virtual void Reset() = 0;
  virtual std::optional<Element> Query(Element x) = 0;
  virtual Element Output(std::optional<bool> answer) = 0;
  // nullopt: unlimited.
  virtual std::optional<int> QueryBudget() const { return std::nullopt; }
  virtual std::string Name() const = 0;
};

// ---- baselines and the two-branch proof generators ----

enum class Baseline { kMaxPlusOne, kMinMinusOne, kFollowSuffix };

std::unique_ptr<Generator> baseline(Baseline which);
std::unique_ptr<Generator> omission_generator_ci(int i);
std::unique_ptr<Generator> noise_level_generator_ci(int i);
std::unique_ptr<Generator> sensitivity_generator_gi(int i);

// ---- sampleless streams ----

// Canonical enumeration of the (infinite) intersection of c.
std::unique_ptr<SamplelessSeq> intersection_generator(const CollectionSpec& c);

// Chain generator; candidates are taken in zigzag rank order.
std::unique_ptr<SamplelessSeq> chain_generator(
    const CollectionSpec& chain, std::size_t probe_cap = kDefaultProbeCap);

// Any injective stream from a fixed list, then fails. Used in tests.
std::unique_ptr<SamplelessSeq> list_stream(std::vector<Element> values);

// ---- conversions ----

std::unique_ptr<Generator> noisy_from_sampleless(
    std::unique_ptr<SamplelessSeq> z);

enum class FeedOrder { kNaturals, kZigzag };

std::unique_ptr<SamplelessSeq> sampleless_from_noisy(
    std::unique_ptr<Generator> g, FeedOrder order = FeedOrder::kZigzag,
    std::size_t probe_cap = kDefaultProbeCap);

std::unique_ptr<Generator> dedup_wrapper(std::unique_ptr<Generator> g);

std::unique_ptr<Generator> reduce_by_prefix(std::unique_ptr<Generator> g,
                                            std::vector<Element> removed);

// ---- feedback ----

class FeedbackUnionGenerator : public FeedbackGenerator {
 public:
  FeedbackUnionGenerator(std::vector<CollectionSpec> parts,
                         std::size_t probe_cap);

  void Reset() override;
  std::optional<Element> Query(Element x) override;
  Element Output(std::optional<bool> answer) override;
  std::string Name() const override { return "alg4"; }

  // Index of the part in use; equals the number of parts left behind.
  std::size_t current_part() const { return part_; }

 private:
  enum class Phase { kEnterPart, kGatherCheck, kGather, kStream };

  void Settle();

  std::vector<CollectionSpec> parts_;
  std::size_t probe_cap_;
  std::size_t part_ = 0;
  Phase phase_ = Phase::kEnterPart;
  int dim_ = -1;
  ClosureResult b_;
  ElementSet seen_;
  Element v_ = 0;
};

std::unique_ptr<FeedbackUnionGenerator> feedback_union_generator(
    std::vector<CollectionSpec> parts,
    std::size_t probe_cap = kDefaultProbeCap);

// Query order for the identifier: t itself, or the t-th zigzag element.
enum class QueryOrder { kNaturals, kZigzag };

// Outputs language indices.
std::unique_ptr<FeedbackGenerator> identifier(
    const CollectionSpec& c, QueryOrder order = QueryOrder::kNaturals);

// Queries -1 once at t = 0; min - 1 on Yes, max + 1 on No.
std::unique_ptr<FeedbackGenerator> toy_one_query();

// Snapshot of one replay of the stripped generator.
struct DecisionTreeRecord {
  std::size_t t = 0;
  std::vector<std::size_t> query_times;  // Q_t, sorted
  std::vector<Element> queries;          // s
  std::vector<bool> responses;           // r, true = Yes
  std::uint64_t preorder = 0;            // node v_t in the depth-i tree
};

class DecisionTreeMonitor {
 public:
  void Record(DecisionTreeRecord r) { records_.push_back(std::move(r)); }
  void Clear() { records_.clear(); }
  const std::vector<DecisionTreeRecord>& records() const { return records_; }
  bool PreorderMonotone() const;

 private:
  std::vector<DecisionTreeRecord> records_;
};

// Preorder index of the node reached by `responses` in a full binary tree of
// depth `depth`. No is the left edge, Yes the right edge.
std::uint64_t preorder_index(const std::vector<bool>& responses, int depth);

class StripQueries : public Generator {
 public:
  explicit StripQueries(std::unique_ptr<FeedbackGenerator> g);

  void Reset() override;
  Element Step(Element x) override;
  std::string Name() const override;

  const DecisionTreeMonitor& monitor() const { return monitor_; }

 private:
  std::unique_ptr<FeedbackGenerator> g_;
  int budget_;
  std::vector<Element> xs_;
  ElementSet seen_;
  DecisionTreeMonitor monitor_;
};

std::unique_ptr<StripQueries> strip_queries(
    std::unique_ptr<FeedbackGenerator> g);

}  // namespace langlimit

#endif  // LANGLIMIT_GENERATORS_H_
