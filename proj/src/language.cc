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

#include "langlimit/language.h"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "langlimit/errors.h"

namespace langlimit {
namespace {

// Ranges like [j, -1] for a negative tail start are materialized; keep them
// bounded.
constexpr Element kMaxMaterializedRange = 1'000'000;

struct CanonicalForm {
  ElementSet finite;
  std::optional<Element> tail;
  bool negatives;
  ElementSet holes;

  auto Tie() const { return std::tie(finite, tail, negatives, holes); }
};

CanonicalForm Canonicalize(const ClosedFormLanguage& l) {
  CanonicalForm c{{}, l.tail_start(), l.include_negatives(), l.holes()};
  for (Element x : l.finite_part()) {
    const bool covered =
        (c.tail && x >= *c.tail) || (c.negatives && x < 0);
    if (!covered) c.finite.insert(x);
  }
  // Move the tail past its last hole; what was skipped becomes finite.
  if (c.tail) {
    auto first = c.holes.lower_bound(*c.tail);
    if (first != c.holes.end()) {
      const Element last = *c.holes.rbegin();
      for (Element x = *c.tail; x <= last; ++x) {
        if (c.holes.count(x) == 0) c.finite.insert(x);
      }
      c.holes.erase(first, c.holes.end());
      c.tail = last + 1;
    }
  }
  // Absorb finite elements sitting directly below the tail.
  while (c.tail && c.finite.count(*c.tail - 1) > 0 &&
         !(c.negatives && *c.tail - 1 < 0)) {
    c.finite.erase(*c.tail - 1);
    --*c.tail;
  }
  return c;
}

void AddRange(Element lo, Element hi, const ElementSet& skip,
              ElementSet* out) {
  if (hi - lo > kMaxMaterializedRange) {
    throw InvalidArgument("range too large to materialize");
  }
  for (Element x = lo; x <= hi; ++x) {
    if (skip.count(x) == 0) out->insert(x);
  }
}

}  // namespace

ClosedFormLanguage::ClosedFormLanguage(ElementSet finite_part,
                                       std::optional<Element> tail_start,
                                       bool include_negatives,
                                       ElementSet holes)
    : finite_part_(std::move(finite_part)),
      tail_start_(tail_start),
      include_negatives_(include_negatives) {
  if (!tail_start_ && !include_negatives_) {
    throw InvalidArgument(
        "a language needs a tail or the negatives to be infinite");
  }
  // P_j u Z_{<0} with j < 0 is the same set as P_0 u Z_{<0}.
  if (include_negatives_ && tail_start_ && *tail_start_ < 0) tail_start_ = 0;
  for (Element h : holes) {
    if (finite_part_.count(h) > 0) {
      throw InvalidArgument("element " + std::to_string(h) +
                            " is both listed and removed");
    }
    if (InInfiniteRegion(h)) holes_.insert(h);
  }
  while (tail_start_ && holes_.count(*tail_start_) > 0) {
    holes_.erase(*tail_start_);
    ++*tail_start_;
  }
  Prepare();
}

ClosedFormLanguage ClosedFormLanguage::Suffix(Element j) {
  return ClosedFormLanguage({}, j, false);
}

ClosedFormLanguage ClosedFormLanguage::Negatives() {
  return ClosedFormLanguage({}, std::nullopt, true);
}

void ClosedFormLanguage::Prepare() {
  finite_sorted_.assign(finite_part_.begin(), finite_part_.end());
  tail_skips_.clear();
  negative_skips_.clear();
  ElementSet skips = finite_part_;
  skips.insert(holes_.begin(), holes_.end());
  for (Element s : skips) {
    if (tail_start_ && s >= *tail_start_) tail_skips_.push_back(s);
    if (include_negatives_ && s < 0) negative_skips_.push_back(s);
  }
  std::reverse(negative_skips_.begin(), negative_skips_.end());
}

bool ClosedFormLanguage::InInfiniteRegion(Element x) const {
  return (tail_start_ && x >= *tail_start_) || (include_negatives_ && x < 0);
}

bool ClosedFormLanguage::Contains(Element x) const {
  if (finite_part_.count(x) > 0) return true;
  return InInfiniteRegion(x) && holes_.count(x) == 0;
}

Element ClosedFormLanguage::NthTail(std::size_t n) const {
  Element x = *tail_start_ + static_cast<Element>(n);
  for (Element s : tail_skips_) {
    if (s > x) break;
    ++x;
  }
  return x;
}

Element ClosedFormLanguage::NthNegative(std::size_t n) const {
  Element x = -1 - static_cast<Element>(n);
  for (Element s : negative_skips_) {
    if (s < x) break;
    --x;
  }
  return x;
}

Element ClosedFormLanguage::At(std::size_t k) const {
  if (k < finite_sorted_.size()) return finite_sorted_[k];
  const std::size_t m = k - finite_sorted_.size();
  if (tail_start_ && include_negatives_) {
    return m % 2 == 0 ? NthTail(m / 2) : NthNegative(m / 2);
  }
  return tail_start_ ? NthTail(m) : NthNegative(m);
}

std::optional<std::size_t> ClosedFormLanguage::IndexOf(Element x) const {
  if (!Contains(x)) return std::nullopt;
  auto it = std::lower_bound(finite_sorted_.begin(), finite_sorted_.end(), x);
  if (it != finite_sorted_.end() && *it == x) {
    return static_cast<std::size_t>(it - finite_sorted_.begin());
  }
  const std::size_t base = finite_sorted_.size();
  const bool both = tail_start_ && include_negatives_;
  if (tail_start_ && x >= *tail_start_) {
    const auto skipped = std::lower_bound(tail_skips_.begin(),
                                          tail_skips_.end(), x) -
                         tail_skips_.begin();
    const auto n = static_cast<std::size_t>(x - *tail_start_ - skipped);
    return base + (both ? 2 * n : n);
  }
  // Negative region; negative_skips_ is descending.
  const auto skipped =
      std::lower_bound(negative_skips_.begin(), negative_skips_.end(), x,
                       std::greater<>()) -
      negative_skips_.begin();
  const auto n = static_cast<std::size_t>(-1 - x - skipped);
  return base + (both ? 2 * n + 1 : n);
}

bool operator==(const ClosedFormLanguage& a, const ClosedFormLanguage& b) {
  return Canonicalize(a).Tie() == Canonicalize(b).Tie();
}

std::string ClosedFormLanguage::ToString() const {
  std::ostringstream out;
  bool first = true;
  auto sep = [&] {
    if (!first) out << " u ";
    first = false;
  };
  if (!finite_part_.empty()) {
    sep();
    out << "{";
    bool inner = true;
    for (Element x : finite_part_) {
      out << (inner ? "" : ",") << x;
      inner = false;
    }
    out << "}";
  }
  if (tail_start_) {
    sep();
    out << "P_" << *tail_start_;
  }
  if (include_negatives_) {
    sep();
    out << "Z<0";
  }
  if (!holes_.empty()) {
    out << " \\ {";
    bool inner = true;
    for (Element x : holes_) {
      out << (inner ? "" : ",") << x;
      inner = false;
    }
    out << "}";
  }
  return out.str();
}

bool member(const ClosedFormLanguage& language, Element x) {
  return language.Contains(x);
}

Element enumerate_at(const ClosedFormLanguage& language, std::size_t k) {
  return language.At(k);
}

ClosedFormLanguage project_language(const ClosedFormLanguage& language,
                                    const ElementSet& removed) {
  ElementSet finite;
  for (Element x : language.finite_part()) {
    if (removed.count(x) == 0) finite.insert(x);
  }
  ElementSet holes = language.holes();
  // The constructor drops holes outside the infinite parts.
  holes.insert(removed.begin(), removed.end());
  return ClosedFormLanguage(std::move(finite), language.tail_start(),
                            language.include_negatives(), std::move(holes));
}

Element ShiftBijection::Apply(Element x) const {
  if (x < 0) return x;
  if (!inverse) return x + shift;
  if (x < shift) {
    throw InvalidArgument("element " + std::to_string(x) +
                          " is outside the image of the shift");
  }
  return x - shift;
}

bool ShiftBijection::InDomain(Element x) const {
  return !inverse || x < 0 || x >= shift;
}

ClosedFormLanguage map_language(const ClosedFormLanguage& language,
                                const ShiftBijection& f) {
  if (f.shift < 0) throw InvalidArgument("shift must be non-negative");
  if (f.inverse) {
    for (Element x = 0; x < f.shift; ++x) {
      if (language.Contains(x)) {
        throw InvalidArgument("language meets [0, shift); inverse undefined");
      }
    }
  }
  ElementSet finite;
  for (Element x : language.finite_part()) finite.insert(f.Apply(x));
  ElementSet holes;
  for (Element h : language.holes()) {
    if (f.InDomain(h)) holes.insert(f.Apply(h));
  }
  std::optional<Element> tail = language.tail_start();
  if (tail) {
    const Element boundary = f.inverse ? f.shift : 0;
    if (*tail >= boundary) {
      tail = f.Apply(*tail);
    } else {
      // Only reachable without negatives: [tail, -1] maps to itself and the
      // non-negative part of the tail starts at f(boundary).
      AddRange(*tail, -1, language.holes(), &finite);
      tail = f.Apply(boundary);
    }
  }
  return ClosedFormLanguage(std::move(finite), tail,
                            language.include_negatives(), std::move(holes));
}

std::optional<ClosedFormLanguage> intersect_languages(
    const ClosedFormLanguage& a, const ClosedFormLanguage& b,
    ElementSet* finite_out) {
  std::optional<Element> tail;
  if (a.tail_start() && b.tail_start()) {
    tail = std::max(*a.tail_start(), *b.tail_start());
  }
  const bool negatives = a.include_negatives() && b.include_negatives();

  ElementSet candidates = a.finite_part();
  candidates.insert(b.finite_part().begin(), b.finite_part().end());
  // A negative tail start overlapping the other side's negatives.
  if (a.tail_start() && *a.tail_start() < 0 && b.include_negatives()) {
    AddRange(*a.tail_start(), -1, {}, &candidates);
  }
  if (b.tail_start() && *b.tail_start() < 0 && a.include_negatives()) {
    AddRange(*b.tail_start(), -1, {}, &candidates);
  }
  ElementSet finite;
  for (Element x : candidates) {
    if (a.Contains(x) && b.Contains(x)) finite.insert(x);
  }
  if (!tail && !negatives) {
    if (finite_out) *finite_out = std::move(finite);
    return std::nullopt;
  }
  ElementSet holes = a.holes();
  holes.insert(b.holes().begin(), b.holes().end());
  for (Element x : finite) holes.erase(x);
  return ClosedFormLanguage(std::move(finite), tail, negatives,
                            std::move(holes));
}

Element zigzag_encode(std::int64_t n) {
  if (n < 0) throw InvalidArgument("zigzag_encode takes a natural number");
  return n % 2 == 0 ? n / 2 : -(n + 1) / 2;
}

std::int64_t zigzag_decode(Element z) { return z >= 0 ? 2 * z : -2 * z - 1; }

const char* ToString(Membership m) {
  switch (m) {
    case Membership::kIn:
      return "In";
    case Membership::kOut:
      return "Out";
    case Membership::kUnknown:
      return "Unknown";
  }
  return "?";
}

void TranscriptLimitLanguage::AddSeen(Element x) {
  if (excluded_.count(x) > 0) {
    throw InvalidArgument("element " + std::to_string(x) +
                          " was excluded from the limit language");
  }
  seen_.insert(x);
}

void TranscriptLimitLanguage::Exclude(Element x) {
  if (seen_.count(x) > 0 || (promised_ && promised_->Contains(x))) {
    throw InvalidArgument("cannot exclude member " + std::to_string(x));
  }
  excluded_.insert(x);
}

Membership TranscriptLimitLanguage::Status(Element x) const {
  if (seen_.count(x) > 0 || (promised_ && promised_->Contains(x))) {
    return Membership::kIn;
  }
  if (excluded_.count(x) > 0) return Membership::kOut;
  return Membership::kUnknown;
}

Membership status(const TranscriptLimitLanguage& language, Element x) {
  return language.Status(x);
}

nlohmann::ordered_json ToJson(const ClosedFormLanguage& language) {
  nlohmann::ordered_json j;
  j["finite_part"] = std::vector<Element>(language.finite_part().begin(),
                                          language.finite_part().end());
  if (language.tail_start()) {
    j["tail_start"] = *language.tail_start();
  } else {
    j["tail_start"] = nullptr;
  }
  j["include_negatives"] = language.include_negatives();
  if (!language.holes().empty()) {
    j["holes"] = std::vector<Element>(language.holes().begin(),
                                      language.holes().end());
  }
  return j;
}

ClosedFormLanguage LanguageFromJson(const nlohmann::json& j) {
  try {
    ElementSet finite;
    if (j.contains("finite_part")) {
      for (const auto& x : j.at("finite_part")) finite.insert(x.get<Element>());
    }
    std::optional<Element> tail;
    if (j.contains("tail_start") && !j.at("tail_start").is_null()) {
      tail = j.at("tail_start").get<Element>();
    }
    const bool negatives = j.value("include_negatives", false);
    ElementSet holes;
    if (j.contains("holes")) {
      for (const auto& x : j.at("holes")) holes.insert(x.get<Element>());
    }
    return ClosedFormLanguage(std::move(finite), tail, negatives,
                              std::move(holes));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad language record: ") + e.what());
  }
}

}  // namespace langlimit
