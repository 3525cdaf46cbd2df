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

#ifndef MIA_BASELINES_ATTACK_SCORE_H_
#define MIA_BASELINES_ATTACK_SCORE_H_

#include <map>
#include <span>
#include <string>
#include <string_view>

namespace mia {

// Pre-threshold membership statistic of one sample. Higher means more
// member-like for every attack.
struct AttackScore {
  std::string sample_id;
  std::string method;
  double score = 0.0;
  std::map<std::string, double> diagnostics;
};

inline constexpr std::string_view kAttackPetal = "petal";
inline constexpr std::string_view kAttackPpl = "ppl";
inline constexpr std::string_view kAttackReference = "reference";
inline constexpr std::string_view kAttackZlib = "zlib";
inline constexpr std::string_view kAttackNeighborhood = "neighborhood";
inline constexpr std::string_view kAttackMinK = "mink";
inline constexpr std::string_view kAttackRobustnessRs = "robustness-rs";
inline constexpr std::string_view kAttackRobustnessWs = "robustness-ws";
inline constexpr std::string_view kAttackRobustnessBt = "robustness-bt";

// All registered attack names, in a stable order.
std::span<const std::string_view> RegisteredAttacks();

bool IsRegisteredAttack(std::string_view name);

// Whether the attack needs token log-probabilities from the target.
bool AttackNeedsLogits(std::string_view name);

}  // namespace mia

#endif  // MIA_BASELINES_ATTACK_SCORE_H_
