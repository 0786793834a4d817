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

#include <random>

#include "langlimit/errors.h"
#include "langlimit/language.h"

using namespace langlimit;

namespace {

ClosedFormLanguage P(Element j) { return ClosedFormLanguage::Suffix(j); }

// Random closed-form language with parts near the origin.
ClosedFormLanguage RandomLanguage(std::mt19937_64& rng) {
  auto coin = [&] { return rng() % 2 == 0; };
  ElementSet finite;
  const int n = static_cast<int>(rng() % 6);
  for (int k = 0; k < n; ++k) finite.insert(static_cast<Element>(rng() % 31) - 15);
  std::optional<Element> tail;
  bool neg = coin();
  if (coin() || !neg) tail = static_cast<Element>(rng() % 13);
  ElementSet holes;
  const int h = static_cast<int>(rng() % 3);
  for (int k = 0; k < h; ++k) {
    const Element x = static_cast<Element>(rng() % 31) - 15;
    if (!finite.count(x)) holes.insert(x);
  }
  return ClosedFormLanguage(finite, tail, neg, holes);
}

// Reference membership straight from the definition.
bool Reference(const ElementSet& finite, std::optional<Element> tail, bool neg,
               const ElementSet& holes, Element x) {
  if (finite.count(x)) return true;
  if (holes.count(x)) return false;
  return (tail && x >= *tail) || (neg && x < 0);
}

}  // namespace

TEST_CASE("member examples") {
  CHECK(member(P(3), 3));
  CHECK_FALSE(member(P(3), 2));
  CHECK(member(ClosedFormLanguage({5}, std::nullopt, true), -7));
}

TEST_CASE("enumerate_at examples") {
  CHECK(enumerate_at(P(0), 4) == 4);
  const ClosedFormLanguage a({7}, std::nullopt, true);
  CHECK(std::vector<Element>{a.At(0), a.At(1), a.At(2), a.At(3)} ==
        std::vector<Element>{7, -1, -2, -3});
  const ClosedFormLanguage b({0, -1}, 3, true);
  std::vector<Element> got;
  for (std::size_t k = 0; k < 5; ++k) got.push_back(b.At(k));
  CHECK(got == std::vector<Element>{-1, 0, 3, -2, 4});
}

TEST_CASE("status examples") {
  TranscriptLimitLanguage l(ClosedFormLanguage::Negatives());
  l.AddSeen(0);
  l.AddSeen(-1);
  l.Exclude(1);
  CHECK(status(l, 1) == Membership::kOut);
  CHECK(status(l, -5) == Membership::kIn);
  CHECK(status(l, 42) == Membership::kUnknown);
  CHECK(status(l, 0) == Membership::kIn);
  CHECK_THROWS_AS(l.AddSeen(1), InvalidArgument);
  CHECK_THROWS_AS(l.Exclude(-3), InvalidArgument);
}

TEST_CASE("project_language examples") {
  CHECK(project_language(P(0), {0, 1}) == P(2));
  CHECK(project_language(ClosedFormLanguage({0}, std::nullopt, true), {0}) ==
        ClosedFormLanguage::Negatives());
  CHECK(project_language(ClosedFormLanguage({0, 5}, 8, false), {5, 8}) ==
        ClosedFormLanguage({0}, 9, false));
}

TEST_CASE("map_language examples") {
  CHECK(map_language(P(0), {1, false}) == P(1));
  for (Element c : {0, 1, 4}) {
    CHECK(map_language(ClosedFormLanguage::Negatives(), {c, false}) ==
          ClosedFormLanguage::Negatives());
  }
  CHECK(map_language(ClosedFormLanguage({0}, std::nullopt, true), {3, false}) ==
        ClosedFormLanguage({3}, std::nullopt, true));
  CHECK_THROWS_AS(map_language(P(0), {2, true}), InvalidArgument);
  CHECK_THROWS_AS(map_language(P(0), {-1, false}), InvalidArgument);
}

TEST_CASE("zigzag examples and round trip") {
  CHECK(zigzag_encode(0) == 0);
  CHECK(zigzag_encode(1) == -1);
  CHECK(zigzag_encode(2) == 1);
  CHECK(zigzag_encode(3) == -2);
  for (std::int64_t n = 0; n <= 100'000; ++n) {
    REQUIRE(zigzag_decode(zigzag_encode(n)) == n);
  }
  for (Element z = -50'000; z <= 50'000; ++z) {
    REQUIRE(zigzag_encode(zigzag_decode(z)) == z);
  }
}

TEST_CASE("constructor rejects malformed input") {
  CHECK_THROWS_AS(ClosedFormLanguage({1, 2}, std::nullopt, false),
                  InvalidArgument);
  CHECK_THROWS_AS(ClosedFormLanguage({5}, 0, false, {5}), InvalidArgument);
}

TEST_CASE("equality is extensional") {
  CHECK(ClosedFormLanguage({3, 4}, 5, false) == P(3));
  CHECK(ClosedFormLanguage({7}, 5, false) == P(5));
  CHECK(ClosedFormLanguage({-1, -2}, std::nullopt, true) ==
        ClosedFormLanguage::Negatives());
  CHECK_FALSE(P(3) == P(4));
  CHECK(ClosedFormLanguage({}, 3, false, {3}) == P(4));
  CHECK(ClosedFormLanguage({}, 3, false, {4}) ==
        ClosedFormLanguage({3}, 5, false));
  CHECK(ClosedFormLanguage({}, 0, true, {2, -4}) ==
        ClosedFormLanguage({0, 1}, 3, true, {-4}));
  CHECK_FALSE(ClosedFormLanguage({}, 0, true, {-4}) ==
              ClosedFormLanguage({}, 0, true, {-5}));
}

TEST_CASE("property: equality matches membership on random pairs") {
  std::mt19937_64 rng(7);
  std::size_t equal_pairs = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const ClosedFormLanguage a = RandomLanguage(rng);
    const ClosedFormLanguage b = RandomLanguage(rng);
    bool same = a.tail_start().has_value() == b.tail_start().has_value() &&
                a.include_negatives() == b.include_negatives();
    for (Element x = -60; same && x <= 60; ++x) {
      same = a.Contains(x) == b.Contains(x);
    }
    REQUIRE((a == b) == same);
    equal_pairs += same;
  }
  CHECK(equal_pairs > 0);
}

TEST_CASE("property: random languages") {
  std::mt19937_64 rng(20261016);
  for (int trial = 0; trial < 400; ++trial) {
    const ClosedFormLanguage l = RandomLanguage(rng);
    CAPTURE(l.ToString());
    // Membership against the definition, through the original parameters.
    for (Element x = -40; x <= 40; ++x) {
      REQUIRE(l.Contains(x) == Reference(l.finite_part(), l.tail_start(),
                                         l.include_negatives(), l.holes(), x));
    }
    // Injective enumeration of members, inverse via IndexOf.
    constexpr std::size_t kN = 200;
    ElementSet listed;
    for (std::size_t k = 0; k < kN; ++k) {
      const Element x = l.At(k);
      REQUIRE(l.Contains(x));
      REQUIRE(listed.insert(x).second);
      REQUIRE(l.IndexOf(x) == k);
    }
    // Completeness on a window: every member near 0 appears early.
    for (Element x = -30; x <= 30; ++x) {
      if (l.Contains(x)) {
        REQUIRE(l.IndexOf(x).has_value());
        REQUIRE(*l.IndexOf(x) < 4 * 31 + 16);
        REQUIRE(l.At(*l.IndexOf(x)) == x);
      } else {
        REQUIRE_FALSE(l.IndexOf(x).has_value());
      }
    }
    // Projection agrees with membership.
    ElementSet removed;
    for (int k = 0; k < 4; ++k) removed.insert(static_cast<Element>(rng() % 31) - 15);
    const ClosedFormLanguage p = project_language(l, removed);
    for (Element x = -40; x <= 40; ++x) {
      REQUIRE(p.Contains(x) == (l.Contains(x) && !removed.count(x)));
    }
    // map then inverse map.
    const Element c = static_cast<Element>(rng() % 6);
    const ClosedFormLanguage m = map_language(l, {c, false});
    for (Element x = -40; x <= 40; ++x) {
      REQUIRE(m.Contains(ShiftBijection{c, false}.Apply(x)) == l.Contains(x));
    }
    REQUIRE(map_language(m, {c, true}) == l);
    // JSON.
    REQUIRE(LanguageFromJson(ToJson(l)) == l);
    // Intersections.
    const ClosedFormLanguage other = RandomLanguage(rng);
    ElementSet finite;
    const auto both = intersect_languages(l, other, &finite);
    for (Element x = -40; x <= 40; ++x) {
      const bool in = l.Contains(x) && other.Contains(x);
      if (both) {
        REQUIRE(both->Contains(x) == in);
      } else {
        REQUIRE(finite.count(x) == (in ? 1u : 0u));
      }
    }
    const bool infinite = (l.tail_start() && other.tail_start()) ||
                          (l.include_negatives() && other.include_negatives());
    REQUIRE(both.has_value() == infinite);
  }
}

TEST_CASE("JSON omits empty holes") {
  CHECK_FALSE(ToJson(P(2)).contains("holes"));
  CHECK(ToJson(ClosedFormLanguage({}, 2, false, {4})).contains("holes"));
}
