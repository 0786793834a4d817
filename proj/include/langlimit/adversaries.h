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

#ifndef LANGLIMIT_ADVERSARIES_H_
#define LANGLIMIT_ADVERSARIES_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "langlimit/language.h"
#include "langlimit/source.h"

namespace langlimit {

// How the next stage language and ramp are built after a trigger at t_j with
// output z:
//   kAfterTrigger: L = S_{t_j+1} u P_{z+2}, ramp z+2, z+3, ...
//   kAfterMax:     L = R u S_{t_j+1} u P_{1+m}, ramp m+1, m+2, ...
// where m is the running max of every value up to step t_j + 1.
enum class RampRule { kAfterTrigger, kAfterMax };

struct StagedConfig {
  std::string name = "staged-union";
  Element offset = 0;                  // stage 0 enumerates P_offset
  ElementSet reserved;                 // R: in every stage language, never sent
  RampRule rule = RampRule::kAfterTrigger;
  std::vector<Element> noise_prefix;   // sent first, outside the limit
  bool declare_noise = false;          // record 2 + t_j per stage
};

// Stage j's language is R u {first `revealed` limit members sent} u P_ramp;
// StagedAdversary::stage_language builds it on demand.
struct StageInfo {
  std::size_t start = 0;               // first step judged against the stage
  std::optional<std::size_t> trigger;  // t_j
  std::size_t revealed = 0;
  Element ramp = 0;
  std::optional<std::size_t> declared_noise;
};

class StagedAdversary : public Source {
 public:
  explicit StagedAdversary(StagedConfig config);

  void Reset() override;
  Element Next() override;
  void Observe(Element z) override;
  bool adaptive() const override { return true; }
  std::string Name() const override { return config_.name; }

  const StagedConfig& config() const { return config_; }
  const TranscriptLimitLanguage& limit() const { return limit_; }
  const std::vector<StageInfo>& stages() const { return stages_; }
  bool InStage(std::size_t j, Element z) const;
  ClosedFormLanguage stage_language(std::size_t j) const;
  std::vector<std::size_t> trigger_times() const;
  Element running_max() const { return max_; }
  std::size_t negatives_sent() const { return negatives_; }
  // Everything sent so far, noise included.
  const ElementSet& sent() const { return sent_; }

 private:
  enum class Kind { kPrefix, kNegative, kRamp };

  void OpenStage(std::size_t start);
  void Reveal(Element x);

  StagedConfig config_;
  TranscriptLimitLanguage limit_;
  std::vector<StageInfo> stages_;
  ElementSet sent_;
  std::vector<Element> revealed_;  // limit members in send order
  std::unordered_map<Element, std::size_t> reveal_index_;
  std::size_t t_ = 0;
  std::size_t prefix_pos_ = 0;
  bool negative_due_ = false;
  Kind last_kind_ = Kind::kRamp;
  Element ramp_ = 0;
  Element max_ = 0;
  bool have_max_ = false;
  Element last_trigger_z_ = 0;
  std::size_t negatives_ = 0;
};

std::unique_ptr<StagedAdversary> staged_union_adversary();
std::unique_ptr<StagedAdversary> omission_adversary(int i);
std::unique_ptr<StagedAdversary> noise_adversary_composed(int i);
std::unique_ptr<StagedAdversary> sensitivity_noise_adversary();

}  // namespace langlimit

#endif  // LANGLIMIT_ADVERSARIES_H_
