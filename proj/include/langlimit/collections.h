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

#ifndef LANGLIMIT_COLLECTIONS_H_
#define LANGLIMIT_COLLECTIONS_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "langlimit/language.h"

namespace langlimit {

enum class ClosureKind { kFinite, kInfinite, kNoConsistent };

struct ClosureResult {
  ClosureKind kind = ClosureKind::kNoConsistent;
  ElementSet finite;                          // kFinite
  std::optional<ClosedFormLanguage> language;  // kInfinite

  static ClosureResult Finite(ElementSet s);
  static ClosureResult Infinite(ClosedFormLanguage l);
  static ClosureResult NoConsistent();

  bool is_finite() const { return kind == ClosureKind::kFinite; }
  bool is_infinite() const { return kind == ClosureKind::kInfinite; }
  bool Contains(Element x) const;
  std::string ToString() const;
};

// Intersection of two closure results; NoConsistent acts as the identity.
ClosureResult IntersectClosures(const ClosureResult& a, const ClosureResult& b);

class CollectionSpec;

// {(I u A u P_j) \ E : A finite-or-not subset of Z \ E, j in offsets}.
// offset == nullopt means every j in N.
struct SuffixFamily {
  ElementSet required;
  ElementSet forbidden;
  std::optional<Element> offset;
};

// {(I u A u Z_{<0}) \ E : A subset of Z \ E}.
struct NegFamily {
  ElementSet required;
  ElementSet forbidden;
};

// k -> L_k, optionally finite. Searches stop at index_bound.
struct ExplicitCountable {
  std::function<ClosedFormLanguage(std::size_t)> rule;
  std::optional<std::size_t> size;
  std::size_t index_bound = 10'000;
  std::optional<int> declared_dim;
  // Closed-form oracles for infinite rules.
  std::function<ClosureResult(const ElementSet&)> analytic_closure;
  std::function<bool(const ElementSet&)> analytic_consistent;
  std::string name;

  static ExplicitCountable FromList(std::vector<ClosedFormLanguage> languages,
                                    std::string name = "explicit");
};

struct UnionSpec {
  std::vector<CollectionSpec> parts;
  std::optional<int> declared_dim;
};

// C_0 subset C_1 subset ... ; `limit` is the union of all C_t when known.
struct ChainSpec {
  std::function<CollectionSpec(std::size_t)> rule;
  std::size_t bound = 10'000;
  std::shared_ptr<const CollectionSpec> limit;
  std::optional<int> declared_dim;
  std::string name;
};

class CollectionSpec {
 public:
  using Variant = std::variant<SuffixFamily, NegFamily, ExplicitCountable,
                               UnionSpec, ChainSpec>;

  CollectionSpec(SuffixFamily s);        // NOLINT
  CollectionSpec(NegFamily s);           // NOLINT
  CollectionSpec(ExplicitCountable s);   // NOLINT
  CollectionSpec(UnionSpec s);           // NOLINT
  CollectionSpec(ChainSpec s);           // NOLINT

  const Variant& variant() const { return *v_; }
  std::string ToString() const;

  // Structural, not extensional. Explicit and chain variants compare by name.
  friend bool operator==(const CollectionSpec& a, const CollectionSpec& b);

 private:
  std::shared_ptr<const Variant> v_;
};

// Throws IndexBoundExceeded when an explicit/chain search gives up.
bool consistent(const CollectionSpec& c, const ElementSet& s);
ClosureResult closure(const CollectionSpec& c, const ElementSet& s);

// -1 when no set has finite closure. Throws UnboundedClosureDimension for
// the all-offsets suffix family, InvalidArgument when a union or chain has no
// declared value.
int closure_dimension(const CollectionSpec& c);

// The intersection of every language of c (closure of the empty set).
ClosureResult intersection_stream(const CollectionSpec& c);
bool uniform_without_samples_check(const CollectionSpec& c);

CollectionSpec project_collection(const CollectionSpec& c,
                                  const ElementSet& removed);

// t-th member of a chain.
CollectionSpec chain_at(const CollectionSpec& chain, std::size_t t);

// {0, ..., i}.
ElementSet range_set(Element lo, Element hi);

// Registered collections.
CollectionSpec collection_c1();                      // all A u P_j
CollectionSpec collection_c2();                      // all A u Z_{<0}
CollectionSpec collection_ci(int i);                 // C_1^i u C_2^i
CollectionSpec collection_bi(int i);                 // projection of C^i
CollectionSpec collection_suffix_at(Element j);      // A u P_j, fixed j
CollectionSpec collection_p_family();                // {P_i | i in N}
CollectionSpec collection_p_prefixes();              // C_t = {P_0..P_t}
CollectionSpec collection_sensitivity();             // {P_i} u C_2

// Names: "C1", "C2", "C^i:k", "B^i:k", "suffix-at:j", "P-family",
// "P-prefixes", "thm5.4". Throws InvalidArgument otherwise.
CollectionSpec named_collection(const std::string& name);

// Tagged record. Explicit and chain variants serialize by name only.
nlohmann::ordered_json ToJson(const CollectionSpec& c);
// Accepts a name string or a tagged record of suffix/neg/explicit-list/union.
CollectionSpec CollectionFromJson(const nlohmann::json& j);

}  // namespace langlimit

#endif  // LANGLIMIT_COLLECTIONS_H_
