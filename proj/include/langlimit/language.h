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

#ifndef LANGLIMIT_LANGUAGE_H_
#define LANGLIMIT_LANGUAGE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace langlimit {

// Universe elements. Every integer is a valid string.
using Element = std::int64_t;
using ElementSet = std::set<Element>;

// An infinite, decidable subset of the integers of the form
//
//   finite_part  u  P_j  u  Z_{<0}   minus  holes
//
// where P_j = {j, j+1, ...} is present when tail_start is set and Z_{<0} when
// include_negatives is true. At least one infinite part must be present.
//
// Holes are finitely many removed elements of the infinite parts; they appear
// only after projections and are empty for every hand-written language.
//
// The canonical enumeration lists finite_part in increasing order, then
// alternates between the tail (j, j+1, ...) and the negatives (-1, -2, ...),
// skipping anything already listed or removed.
class ClosedFormLanguage {
 public:
  ClosedFormLanguage(ElementSet finite_part, std::optional<Element> tail_start,
                     bool include_negatives, ElementSet holes = {});

  // P_j.
  static ClosedFormLanguage Suffix(Element j);
  // Z_{<0}.
  static ClosedFormLanguage Negatives();

  bool Contains(Element x) const;

  // k-th element of the canonical enumeration.
  Element At(std::size_t k) const;

  // Inverse of At for members; nullopt for non-members.
  std::optional<std::size_t> IndexOf(Element x) const;

  const ElementSet& finite_part() const { return finite_part_; }
  const std::optional<Element>& tail_start() const { return tail_start_; }
  bool include_negatives() const { return include_negatives_; }
  const ElementSet& holes() const { return holes_; }

  // Set equality (not representation equality).
  friend bool operator==(const ClosedFormLanguage& a,
                         const ClosedFormLanguage& b);

  std::string ToString() const;

 private:
  bool InInfiniteRegion(Element x) const;
  Element NthTail(std::size_t n) const;
  Element NthNegative(std::size_t n) const;
  void Prepare();

  ElementSet finite_part_;
  std::optional<Element> tail_start_;
  bool include_negatives_ = false;
  ElementSet holes_;

  // Sorted skip lists for the two infinite parts (finite part u holes).
  std::vector<Element> tail_skips_;      // ascending, all >= tail_start
  std::vector<Element> negative_skips_;  // descending, all < 0
  std::vector<Element> finite_sorted_;
};

bool member(const ClosedFormLanguage& language, Element x);
Element enumerate_at(const ClosedFormLanguage& language, std::size_t k);

// L n (Z \ removed). Finite removals never make a closed-form language
// finite, so the result is always a language.
ClosedFormLanguage project_language(const ClosedFormLanguage& language,
                                    const ElementSet& removed);

// The piecewise shift x -> x for x < 0, x -> x + shift for x >= 0, or its
// inverse. These are the only bijections the isomorphism arguments need.
struct ShiftBijection {
  Element shift = 0;
  bool inverse = false;

  Element Apply(Element x) const;
  // Whether x is in the domain (the inverse is undefined on [0, shift)).
  bool InDomain(Element x) const;
  ShiftBijection Inverted() const { return {shift, !inverse}; }
};

// {f(x) | x in L}. Throws InvalidArgument for negative shifts or when the
// inverse map is applied to a language meeting [0, shift).
ClosedFormLanguage map_language(const ClosedFormLanguage& language,
                                const ShiftBijection& f);

// Intersection of two languages. Returns nullopt when the intersection is
// finite; `finite_out` then receives it.
std::optional<ClosedFormLanguage> intersect_languages(
    const ClosedFormLanguage& a, const ClosedFormLanguage& b,
    ElementSet* finite_out);

// Fixed bijection N <-> Z: 0, -1, 1, -2, 2, ...
Element zigzag_encode(std::int64_t n);
std::int64_t zigzag_decode(Element z);

// Tri-state membership for the limit language of an adaptive run.
enum class Membership { kIn, kOut, kUnknown };

const char* ToString(Membership m);

// The language K = u {x_t} an adaptive adversary is building. It is never
// known in full mid-run; `excluded` holds elements the adversary has
// committed never to enumerate, which certifies mistakes at finite time.
class TranscriptLimitLanguage {
 public:
  TranscriptLimitLanguage() = default;
  explicit TranscriptLimitLanguage(std::optional<ClosedFormLanguage> promised)
      : promised_(std::move(promised)) {}

  // Throws InvalidArgument if x was excluded.
  void AddSeen(Element x);
  // Throws InvalidArgument if x was already seen or is promised.
  void Exclude(Element x);

  Membership Status(Element x) const;

  const ElementSet& seen() const { return seen_; }
  const ElementSet& excluded() const { return excluded_; }
  const std::optional<ClosedFormLanguage>& promised() const {
    return promised_;
  }

 private:
  ElementSet seen_;
  ElementSet excluded_;
  std::optional<ClosedFormLanguage> promised_;
};

Membership status(const TranscriptLimitLanguage& language, Element x);

// {finite_part, tail_start, include_negatives} record; "holes" is written
// only when non-empty.
nlohmann::ordered_json ToJson(const ClosedFormLanguage& language);
ClosedFormLanguage LanguageFromJson(const nlohmann::json& j);

}  // namespace langlimit

#endif  // LANGLIMIT_LANGUAGE_H_
