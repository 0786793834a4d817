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

// Closure oracle on the wider window W = [-20, 20], one sample set at a time.
//
// A collection is flattened into a short list of bases. An extensible base
// stands for every finite superset that avoids its forbidden mask, so its
// smallest member holding S is base | S. A fixed base is one language. The
// closure of S is the AND over all bases that admit S.

#ifndef LANGLIMIT_TESTS_WIDE_ORACLE_H_
#define LANGLIMIT_TESTS_WIDE_ORACLE_H_

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "langlimit/collections.h"

namespace wide {

using langlimit::ClosedFormLanguage;
using langlimit::CollectionSpec;
using langlimit::Element;
using langlimit::ElementSet;

inline constexpr Element kLo = -20;
inline constexpr Element kHi = 20;
inline constexpr int kBits = kHi - kLo + 1;
inline constexpr std::uint64_t kFull = (std::uint64_t{1} << kBits) - 1;

inline std::uint64_t Bit(Element x) { return std::uint64_t{1} << (x - kLo); }

inline std::uint64_t MaskOf(const ElementSet& s) {
  std::uint64_t m = 0;
  for (Element x : s) {
    if (x < kLo || x > kHi) throw std::logic_error("set leaves the window");
    m |= Bit(x);
  }
  return m;
}

inline std::uint64_t Interval(Element a, Element b) {
  std::uint64_t m = 0;
  for (Element x = std::max(a, kLo); x <= std::min(b, kHi); ++x) m |= Bit(x);
  return m;
}

struct Base {
  std::uint64_t mask = 0;
  std::uint64_t forbidden = 0;
  bool extensible = false;
  bool tail = false;  // keeps every large positive
  bool neg = false;   // keeps every large negative
};

struct Answer {
  bool consistent = false;
  std::uint64_t window = kFull;
  bool tail = true;
  bool neg = true;
  bool infinite() const { return consistent && (tail || neg); }
};

class WideOracle {
 public:
  explicit WideOracle(const CollectionSpec& c) { Add(c); }

  Answer Closure(const ElementSet& s) const {
    const std::uint64_t sm = MaskOf(s);
    Answer a;
    for (const Base& b : bases_) {
      std::uint64_t member;
      if (b.extensible) {
        if (sm & b.forbidden) continue;
        member = b.mask | sm;
      } else {
        if (sm & ~b.mask) continue;
        member = b.mask;
      }
      a.consistent = true;
      a.window &= member;
      a.tail = a.tail && b.tail;
      a.neg = a.neg && b.neg;
    }
    return a;
  }

  std::size_t size() const { return bases_.size(); }

 private:
  void Add(const CollectionSpec& c) {
    const auto& v = c.variant();
    if (const auto* s = std::get_if<langlimit::SuffixFamily>(&v)) {
      const std::uint64_t req = MaskOf(s->required);
      const std::uint64_t forb = MaskOf(s->forbidden);
      auto push = [&](std::uint64_t m, bool tail) {
        if (m & forb) return;
        bases_.push_back({m, forb, true, tail, false});
      };
      if (s->offset) {
        push(req | (Interval(*s->offset, kHi) & ~forb), true);
      } else {
        for (Element j = 0; j <= kHi; ++j) {
          push(req | (Interval(j, kHi) & ~forb), true);
        }
        push(req, false);
      }
    } else if (const auto* n = std::get_if<langlimit::NegFamily>(&v)) {
      const std::uint64_t forb = MaskOf(n->forbidden);
      const std::uint64_t m = MaskOf(n->required) | (Interval(kLo, -1) & ~forb);
      if (!(m & forb)) bases_.push_back({m, forb, true, false, true});
    } else if (const auto* e = std::get_if<langlimit::ExplicitCountable>(&v)) {
      const std::size_t n = e->size.value_or(kHi + 2);
      for (std::size_t k = 0; k < n; ++k) {
        const ClosedFormLanguage l = e->rule(k);
        Base b;
        for (Element x = kLo; x <= kHi; ++x) {
          if (l.Contains(x)) b.mask |= Bit(x);
        }
        b.tail = l.tail_start().has_value() && (e->size || k + 1 < n);
        b.neg = l.include_negatives();
        bases_.push_back(b);
      }
    } else if (const auto* u = std::get_if<langlimit::UnionSpec>(&v)) {
      for (const auto& part : u->parts) Add(part);
    } else if (const auto* ch = std::get_if<langlimit::ChainSpec>(&v)) {
      if (!ch->limit) throw std::logic_error("chain without a limit");
      Add(*ch->limit);
    }
  }

  std::vector<Base> bases_;
};

// Every S inside the window with |S| <= k.
inline std::vector<ElementSet> SmallSets(int k) {
  std::vector<ElementSet> out = {{}};
  std::vector<ElementSet> frontier = {{}};
  for (int size = 1; size <= k; ++size) {
    std::vector<ElementSet> next;
    for (const auto& s : frontier) {
      const Element from = s.empty() ? kLo : *s.rbegin() + 1;
      for (Element x = from; x <= kHi; ++x) {
        ElementSet t = s;
        t.insert(x);
        next.push_back(t);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace wide

#endif  // LANGLIMIT_TESTS_WIDE_ORACLE_H_
