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

#include <algorithm>
#include <limits>

#include "langlimit/errors.h"
#include "langlimit/source.h"

namespace langlimit {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("empty range");
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

ScriptedSource::ScriptedSource(ScriptedSpec spec) : spec_(std::move(spec)) {
  for (Element x : spec_.omissions) {
    if (!spec_.truth.Contains(x)) {
      throw InvalidArgument("omitted element " + std::to_string(x) +
                            " is not in the truth");
    }
  }
  for (const auto& [pos, x] : spec_.noise) {
    if (spec_.truth.Contains(x)) {
      throw InvalidArgument("noise element " + std::to_string(x) +
                            " belongs to the truth");
    }
    if (!noise_at_.emplace(pos, x).second) {
      throw InvalidArgument("two noise elements at position " +
                            std::to_string(pos));
    }
  }
  if (noise_set().size() != spec_.noise.size()) {
    throw InvalidArgument("noise elements must be distinct");
  }
  if (spec_.block == 0) throw InvalidArgument("block size must be positive");
  if (spec_.max_repeat < 1) throw InvalidArgument("max_repeat must be >= 1");
  Reset();
}

void ScriptedSource::Reset() {
  order_rng_.seed(spec_.seed);
  repeat_rng_.seed(spec_.seed ^ 0x9e3779b97f4a7c15ULL);
  canonical_k_ = 0;
  block_.clear();
  block_pos_ = 0;
  position_ = 0;
  pending_repeats_ = 0;
  last_ = 0;
}

ElementSet ScriptedSource::noise_set() const {
  ElementSet out;
  for (const auto& entry : spec_.noise) out.insert(entry.second);
  return out;
}

bool ScriptedSource::omitted(Element x) const {
  if (spec_.omissions.count(x) > 0) return true;
  if (spec_.omission_stride > 1) {
    const auto k = spec_.truth.IndexOf(x);
    return k && *k % spec_.omission_stride != 0;
  }
  return false;
}

Element ScriptedSource::NextBase() {
  while (true) {
    const std::size_t k = canonical_k_++;
    if (spec_.omission_stride > 1 && k % spec_.omission_stride != 0) continue;
    const Element x = spec_.truth.At(k);
    if (spec_.omissions.count(x) == 0) return x;
  }
}

void ScriptedSource::FillBlock() {
  block_.clear();
  block_pos_ = 0;
  for (std::size_t k = 0; k < spec_.block; ++k) block_.push_back(NextBase());
  // Fisher-Yates.
  for (std::size_t k = block_.size(); k > 1; --k) {
    std::swap(block_[k - 1], block_[uniform_below(order_rng_, k)]);
  }
}

Element ScriptedSource::Next() {
  if (pending_repeats_ > 0) {
    --pending_repeats_;
    return last_;
  }
  Element x;
  auto noise = noise_at_.find(position_);
  if (noise != noise_at_.end()) {
    x = noise->second;
  } else if (spec_.order == OrderKind::kCanonical) {
    x = NextBase();
  } else {
    if (block_pos_ >= block_.size()) FillBlock();
    x = block_[block_pos_++];
  }
  ++position_;
  if (spec_.repetitions) {
    pending_repeats_ = static_cast<int>(
        uniform_below(repeat_rng_, static_cast<std::uint64_t>(spec_.max_repeat)));
  }
  last_ = x;
  return x;
}

nlohmann::ordered_json ToJson(const ScriptedSpec& spec) {
  nlohmann::ordered_json j;
  j["truth"] = ToJson(spec.truth);
  j["order"] = spec.order == OrderKind::kCanonical ? "canonical" : "permuted";
  j["seed"] = spec.seed;
  j["block"] = spec.block;
  j["omissions"] =
      std::vector<Element>(spec.omissions.begin(), spec.omissions.end());
  j["omission_stride"] = spec.omission_stride;
  auto noise = nlohmann::ordered_json::array();
  for (const auto& [pos, x] : spec.noise) {
    noise.push_back(nlohmann::ordered_json::array({pos, x}));
  }
  j["noise"] = std::move(noise);
  j["repetitions"] = spec.repetitions;
  if (spec.repetitions) j["max_repeat"] = spec.max_repeat;
  return j;
}

ScriptedSpec ScriptedSpecFromJson(const nlohmann::json& j) {
  try {
    ScriptedSpec s;
    s.truth = LanguageFromJson(j.at("truth"));
    const std::string order = j.value("order", "canonical");
    if (order == "canonical") {
      s.order = OrderKind::kCanonical;
    } else if (order == "permuted") {
      s.order = OrderKind::kPermuted;
    } else {
      throw InvalidArgument("unknown order '" + order + "'");
    }
    s.seed = j.value("seed", std::uint64_t{0});
    s.block = j.value("block", std::size_t{16});
    if (j.contains("omissions")) {
      for (const auto& x : j.at("omissions")) {
        s.omissions.insert(x.get<Element>());
      }
    }
    s.omission_stride = j.value("omission_stride", std::size_t{0});
    if (j.contains("noise")) {
      for (const auto& entry : j.at("noise")) {
        s.noise.emplace_back(entry.at(0).get<std::size_t>(),
                             entry.at(1).get<Element>());
      }
    }
    s.repetitions = j.value("repetitions", false);
    s.max_repeat = j.value("max_repeat", 5);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad scripted source record: ") +
                          e.what());
  }
}

}  // namespace langlimit
