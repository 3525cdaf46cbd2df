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

#ifndef MIA_ORACLE_DECODING_H_
#define MIA_ORACLE_DECODING_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace mia {

enum class DecodingStrategy { kGreedy, kNucleus, kContrastive };

std::string_view DecodingStrategyName(DecodingStrategy strategy);
absl::StatusOr<DecodingStrategy> ParseDecodingStrategy(std::string_view name);

struct DecodingConfig {
  DecodingStrategy strategy = DecodingStrategy::kGreedy;
  std::optional<double> nucleus_p;
  std::optional<int> contrastive_k;
  std::optional<double> contrastive_alpha;
  // Stochastic strategies without a seed are never served from the cache.
  std::optional<uint64_t> seed;

  static DecodingConfig Greedy() { return {}; }
  static DecodingConfig Nucleus(double p,
                                std::optional<uint64_t> seed = std::nullopt);
  static DecodingConfig Contrastive(int k, double alpha);

  absl::Status Validate() const;

  bool is_deterministic() const {
    return strategy != DecodingStrategy::kNucleus || seed.has_value();
  }

  // Stable text form used in cache keys. Parameters that the strategy ignores
  // are omitted, so e.g. every greedy config maps to "greedy".
  std::string CanonicalString() const;

  friend bool operator==(const DecodingConfig&,
                         const DecodingConfig&) = default;
};

}  // namespace mia

#endif  // MIA_ORACLE_DECODING_H_
