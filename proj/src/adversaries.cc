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

#include "langlimit/adversaries.h"

#include <algorithm>

#include "langlimit/errors.h"

namespace langlimit {

StagedAdversary::StagedAdversary(StagedConfig config)
    : config_(std::move(config)) {
  if (config_.offset < 0) throw InvalidArgument("offset must be natural");
  for (Element x : config_.reserved) {
    if (x < 0) throw InvalidArgument("reserved elements must be natural");
  }
  ElementSet prefix(config_.noise_prefix.begin(), config_.noise_prefix.end());
  if (prefix.size() != config_.noise_prefix.size()) {
    throw InvalidArgument("noise prefix repeats an element");
  }
  for (Element x : prefix) {
    if (x < 0 || x >= config_.offset) {
      throw InvalidArgument("noise must lie in [0, offset)");
    }
  }
  Reset();
}

void StagedAdversary::Reset() {
  limit_ = TranscriptLimitLanguage(ClosedFormLanguage::Negatives());
  for (Element x : config_.reserved) limit_.Exclude(x);
  for (Element x : config_.noise_prefix) limit_.Exclude(x);
  stages_.clear();
  sent_.clear();
  revealed_.clear();
  reveal_index_.clear();
  t_ = 0;
  prefix_pos_ = 0;
  negative_due_ = false;
  last_kind_ = Kind::kRamp;
  ramp_ = config_.offset;
  max_ = 0;
  have_max_ = false;
  last_trigger_z_ = 0;
  negatives_ = 0;

  StageInfo first;
  first.start = config_.noise_prefix.size();
  first.ramp = config_.offset;
  if (config_.declare_noise) first.declared_noise = 0;
  stages_.push_back(std::move(first));
}

Element StagedAdversary::Next() {
  Element x;
  if (prefix_pos_ < config_.noise_prefix.size()) {
    x = config_.noise_prefix[prefix_pos_++];
    last_kind_ = Kind::kPrefix;
  } else if (negative_due_) {
    x = -static_cast<Element>(++negatives_);
    negative_due_ = false;
    last_kind_ = Kind::kNegative;
    Reveal(x);
  } else {
    x = ramp_++;
    last_kind_ = Kind::kRamp;
    Reveal(x);
  }
  sent_.insert(x);
  max_ = have_max_ ? std::max(max_, x) : x;
  have_max_ = true;
  return x;
}

void StagedAdversary::Observe(Element z) {
  max_ = std::max(max_, z);
  switch (last_kind_) {
    case Kind::kPrefix:
      break;
    case Kind::kNegative:
      OpenStage(t_);
      break;
    case Kind::kRamp: {
      StageInfo& stage = stages_.back();
      if (InStage(stages_.size() - 1, z) && sent_.count(z) == 0) {
        stage.trigger = t_;
        limit_.Exclude(z);
        last_trigger_z_ = z;
        negative_due_ = true;
      }
      break;
    }
  }
  ++t_;
}

// Called at the negative step t_j + 1, after its output is known.
void StagedAdversary::OpenStage(std::size_t start) {
  const std::size_t trigger = *stages_.back().trigger;
  StageInfo next;
  next.start = start;
  ramp_ = config_.rule == RampRule::kAfterTrigger ? last_trigger_z_ + 2
                                                  : max_ + 1;
  next.ramp = ramp_;
  next.revealed = revealed_.size();
  if (config_.declare_noise) next.declared_noise = 2 + trigger;
  stages_.push_back(std::move(next));
}

void StagedAdversary::Reveal(Element x) {
  limit_.AddSeen(x);
  reveal_index_.emplace(x, revealed_.size());
  revealed_.push_back(x);
}

bool StagedAdversary::InStage(std::size_t j, Element z) const {
  const StageInfo& s = stages_.at(j);
  if (z >= s.ramp || config_.reserved.count(z) > 0) return true;
  const auto it = reveal_index_.find(z);
  return it != reveal_index_.end() && it->second < s.revealed;
}

ClosedFormLanguage StagedAdversary::stage_language(std::size_t j) const {
  const StageInfo& s = stages_.at(j);
  ElementSet finite = config_.reserved;
  finite.insert(revealed_.begin(), revealed_.begin() + s.revealed);
  return ClosedFormLanguage(std::move(finite), s.ramp, false);
}

std::vector<std::size_t> StagedAdversary::trigger_times() const {
  std::vector<std::size_t> out;
  for (const auto& s : stages_) {
    if (s.trigger) out.push_back(*s.trigger);
  }
  return out;
}

std::unique_ptr<StagedAdversary> staged_union_adversary() {
  return std::make_unique<StagedAdversary>(StagedConfig{});
}

std::unique_ptr<StagedAdversary> omission_adversary(int i) {
  if (i < 0) throw InvalidArgument("level must be non-negative");
  StagedConfig c;
  c.name = "omission:" + std::to_string(i);
  c.offset = i + 1;
  for (Element x = 0; x <= i; ++x) c.reserved.insert(x);
  c.rule = RampRule::kAfterMax;
  return std::make_unique<StagedAdversary>(std::move(c));
}

std::unique_ptr<StagedAdversary> noise_adversary_composed(int i) {
  if (i < 0) throw InvalidArgument("level must be non-negative");
  StagedConfig c;
  c.name = "noise-composed:" + std::to_string(i);
  c.offset = i + 1;
  for (Element x = 0; x <= i; ++x) c.noise_prefix.push_back(x);
  c.rule = RampRule::kAfterTrigger;
  return std::make_unique<StagedAdversary>(std::move(c));
}

std::unique_ptr<StagedAdversary> sensitivity_noise_adversary() {
  StagedConfig c;
  c.name = "sensitivity-noise";
  c.rule = RampRule::kAfterMax;
  c.declare_noise = true;
  return std::make_unique<StagedAdversary>(std::move(c));
}

}  // namespace langlimit
