//
// Copyright 2026 The mia-audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef MIA_CORE_TYPES_H_
#define MIA_CORE_TYPES_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace mia {

// Ground-truth membership of a sample in the target's training data.
enum class MembershipLabel { kMember, kNonMember, kUnknown };

std::string_view LabelName(MembershipLabel label);

// Accepts "member"/"nonmember"/"unknown" (any case) and "1"/"0".
absl::StatusOr<MembershipLabel> ParseLabel(std::string_view text);

struct Sample {
  std::string id;
  std::string text;
  MembershipLabel label = MembershipLabel::kUnknown;
  // Precomputed neighbor texts for the neighborhood attack.
  std::optional<std::vector<std::string>> neighbors;
  // Precomputed augmentations keyed by augmentation name ("ws", "bt", ...).
  std::map<std::string, std::vector<std::string>> augmented_inputs;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct Dataset {
  std::string name;
  std::vector<Sample> samples;
  std::optional<int> word_truncation;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace mia

#endif  // MIA_CORE_TYPES_H_
