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

#include "mia/baselines/attack_score.h"

#include <algorithm>
#include <array>

namespace mia {
namespace {

constexpr std::array<std::string_view, 9> kAttacks = {
    kAttackPetal,        kAttackPpl,          kAttackReference,
    kAttackZlib,         kAttackNeighborhood, kAttackMinK,
    kAttackRobustnessRs, kAttackRobustnessWs, kAttackRobustnessBt};

}  // namespace

std::span<const std::string_view> RegisteredAttacks() { return kAttacks; }

bool IsRegisteredAttack(std::string_view name) {
  return std::find(kAttacks.begin(), kAttacks.end(), name) != kAttacks.end();
}

bool AttackNeedsLogits(std::string_view name) {
  return name == kAttackPpl || name == kAttackReference ||
         name == kAttackZlib || name == kAttackNeighborhood ||
         name == kAttackMinK;
}

}  // namespace mia
