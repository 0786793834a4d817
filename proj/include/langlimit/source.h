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

#ifndef LANGLIMIT_SOURCE_H_
#define LANGLIMIT_SOURCE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "langlimit/language.h"

namespace langlimit {

// A string stream. Adaptive sources also see each output after it is made.
class Source {
 public:
  virtual ~Source() = default;
  virtual void Reset() = 0;
  virtual Element Next() = 0;
  virtual void Observe(Element /*z*/) {}
  virtual bool adaptive() const { return false; }
  virtual std::string Name() const = 0;
};

enum class OrderKind { kCanonical, kPermuted };

struct ScriptedSpec {
  ClosedFormLanguage truth = ClosedFormLanguage::Suffix(0);
  OrderKind order = OrderKind::kCanonical;
  std::uint64_t seed = 0;
  std::size_t block = 16;
  // Finite omissions, all members of truth.
  ElementSet omissions;
  // Infinite omissions: keep canonical indices k with k % stride == 0.
  // 0 or 1 keeps everything.
  std::size_t omission_stride = 0;
  // (output position, element); elements are non-members, all distinct.
  std::vector<std::pair<std::size_t, Element>> noise;
  // Repeat each emitted value 1..max_repeat times (seeded).
  bool repetitions = false;
  int max_repeat = 5;
};

nlohmann::ordered_json ToJson(const ScriptedSpec& spec);
ScriptedSpec ScriptedSpecFromJson(const nlohmann::json& j);

// Uniform draw in [0, n) by rejection; independent of the standard library's
// distribution implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

class ScriptedSource : public Source {
 public:
  explicit ScriptedSource(ScriptedSpec spec);

  void Reset() override;
  Element Next() override;
  std::string Name() const override { return "scripted"; }

  const ScriptedSpec& spec() const { return spec_; }
  ElementSet noise_set() const;
  bool omitted(Element x) const;

 private:
  Element NextBase();
  void FillBlock();

  ScriptedSpec spec_;
  std::map<std::size_t, Element> noise_at_;
  std::mt19937_64 order_rng_;
  std::mt19937_64 repeat_rng_;
  std::size_t canonical_k_ = 0;
  std::vector<Element> block_;
  std::size_t block_pos_ = 0;
  std::size_t position_ = 0;
  int pending_repeats_ = 0;
  Element last_ = 0;
};

}  // namespace langlimit

#endif  // LANGLIMIT_SOURCE_H_
